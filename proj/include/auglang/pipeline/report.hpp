#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "json.hpp"

#include "auglang/metrics/report.hpp"

namespace auglang::pipeline {

/// Streaming mean and population standard deviation (Welford).
class RunningStats {
 public:
  void add(double x);
  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  /// Population standard deviation; 0 for a single value.
  double stddev() const;

 private:
  std::size_t n_ = 0;
  double mean_ = 0;
  double m2_ = 0;
};

/// Outputs of one seeded pipeline run.
struct RunRecord {
  nlohmann::json filter_summary;  // FilterReport::summary_json()
  metrics::MetricReport metrics;
};

/// {"runs": n,
///  "filter": {"total"|"accepted"|"rejected.<reason>": {"mean", "std"}},
///  "metrics": {name: {"mean", "std", "direction"}}}
/// A rejection reason missing from a run counts as 0 there. Every run must
/// report the same metric names ("inconsistent_runs" otherwise).
nlohmann::ordered_json aggregate_runs(const std::vector<RunRecord>& runs);

RunRecord load_run(const std::filesystem::path& filter_summary,
                   const std::filesystem::path& metrics_report);

}  // namespace auglang::pipeline
