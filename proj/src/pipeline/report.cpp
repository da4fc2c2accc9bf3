#include "auglang/pipeline/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <string>

#include "auglang/error.hpp"

namespace auglang::pipeline {
namespace {

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("file_not_found", "cannot open '" + path.string() + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error("report_format", "'" + path.string() + "' is not JSON: " + e.what());
  }
}

double count_field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) {
    throw Error("report_format", std::string("filter summary lacks numeric '") + key + "'");
  }
  return j[key].get<double>();
}

nlohmann::ordered_json stats_json(const RunningStats& s) {
  return {{"mean", s.mean()}, {"std", s.stddev()}};
}

}  // namespace

void RunningStats::add(double x) {
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

double RunningStats::stddev() const {
  return n_ < 2 ? 0.0 : std::sqrt(std::max(m2_, 0.0) / static_cast<double>(n_));
}

nlohmann::ordered_json aggregate_runs(const std::vector<RunRecord>& runs) {
  if (runs.empty()) throw Error("empty_input", "report needs at least one run");
  std::set<std::string> reasons;
  for (const auto& r : runs) {
    if (r.filter_summary.contains("rejected") && r.filter_summary["rejected"].is_object()) {
      for (const auto& [reason, _] : r.filter_summary["rejected"].items()) reasons.insert(reason);
    }
  }
  std::map<std::string, RunningStats> filter;
  std::map<std::string, RunningStats> metric;
  const auto& names = runs.front().metrics.entries;
  for (const auto& r : runs) {
    filter["total"].add(count_field(r.filter_summary, "total"));
    filter["accepted"].add(count_field(r.filter_summary, "accepted"));
    for (const auto& reason : reasons) {
      const auto& rej = r.filter_summary.value("rejected", nlohmann::json::object());
      filter["rejected." + reason].add(rej.contains(reason) ? rej[reason].get<double>() : 0.0);
    }
    if (r.metrics.entries.size() != names.size()) {
      throw Error("inconsistent_runs", "runs report different metric sets");
    }
    for (const auto& [name, v] : r.metrics.entries) {
      const auto it = names.find(name);
      if (it == names.end() || it->second.direction != v.direction) {
        throw Error("inconsistent_runs", "metric '" + name + "' is not reported by every run");
      }
      metric[name].add(v.value);
    }
  }
  nlohmann::ordered_json out;
  out["runs"] = runs.size();
  out["filter"] = nlohmann::ordered_json::object();
  for (const auto* key : {"total", "accepted"}) out["filter"][key] = stats_json(filter[key]);
  for (const auto& reason : reasons) {
    out["filter"]["rejected." + reason] = stats_json(filter["rejected." + reason]);
  }
  out["metrics"] = nlohmann::ordered_json::object();
  for (const auto& [name, s] : metric) {
    auto j = stats_json(s);
    j["direction"] = metrics::to_string(names.at(name).direction);
    out["metrics"][name] = std::move(j);
  }
  return out;
}

RunRecord load_run(const std::filesystem::path& filter_summary,
                   const std::filesystem::path& metrics_report) {
  return {read_json(filter_summary), metrics::MetricReport::from_json(read_json(metrics_report))};
}

}  // namespace auglang::pipeline
