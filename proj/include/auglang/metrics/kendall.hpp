#pragma once

#include <cstdint>
#include <span>

namespace auglang::metrics {

struct KendallCounts {
  std::int64_t n0 = 0;  // n(n-1)/2
  std::int64_t n1 = 0;  // pairs tied in x
  std::int64_t n2 = 0;  // pairs tied in y
  std::int64_t s = 0;   // concordant - discordant
};

/// O(n log n) pair counts (sort plus merge-sort inversion count).
KendallCounts kendall_counts(std::span<const double> xs, std::span<const double> ys);

/// Tau-b. Throws "undefined_correlation" when either side is all tied.
double kendall_tau(std::span<const double> xs, std::span<const double> ys);

}  // namespace auglang::metrics
