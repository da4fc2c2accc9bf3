#include "auglang/metrics/kendall.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "auglang/error.hpp"

namespace auglang::metrics {
namespace {

std::int64_t pairs(std::int64_t run) { return run * (run - 1) / 2; }

// Sum of pairs within runs of equal values (input sorted on the key).
template <typename Eq>
std::int64_t tied_pairs(std::size_t n, Eq&& same) {
  std::int64_t total = 0;
  std::int64_t run = 1;
  for (std::size_t i = 1; i < n; ++i) {
    if (same(i - 1, i)) {
      ++run;
    } else {
      total += pairs(run);
      run = 1;
    }
  }
  return total + pairs(run);
}

std::int64_t merge_count(std::vector<double>& v, std::vector<double>& tmp, std::size_t lo,
                         std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::int64_t swaps = merge_count(v, tmp, lo, mid) + merge_count(v, tmp, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      swaps += static_cast<std::int64_t>(mid - i);
      tmp[k++] = v[j++];
    } else {
      tmp[k++] = v[i++];
    }
  }
  while (i < mid) tmp[k++] = v[i++];
  while (j < hi) tmp[k++] = v[j++];
  std::copy(tmp.begin() + static_cast<std::ptrdiff_t>(lo),
            tmp.begin() + static_cast<std::ptrdiff_t>(hi), v.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

}  // namespace

KendallCounts kendall_counts(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw Error("length_mismatch", "kendall_tau inputs differ in length: " +
                                       std::to_string(xs.size()) + " vs " +
                                       std::to_string(ys.size()));
  }
  if (xs.size() < 2) throw Error("empty_input", "kendall_tau needs at least 2 pairs");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) {
      throw Error("non_finite", "kendall_tau input is not finite");
    }
  }
  const std::size_t n = xs.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return xs[a] != xs[b] ? xs[a] < xs[b] : ys[a] < ys[b];
  });
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = ys[order[i]];

  KendallCounts c;
  c.n0 = pairs(static_cast<std::int64_t>(n));
  c.n1 = tied_pairs(n, [&](std::size_t a, std::size_t b) { return xs[order[a]] == xs[order[b]]; });
  const std::int64_t n3 = tied_pairs(n, [&](std::size_t a, std::size_t b) {
    return xs[order[a]] == xs[order[b]] && y[a] == y[b];
  });
  std::vector<double> tmp(n);
  const std::int64_t swaps = merge_count(y, tmp, 0, n);
  c.n2 = tied_pairs(n, [&](std::size_t a, std::size_t b) { return y[a] == y[b]; });
  c.s = c.n0 - c.n1 - c.n2 + n3 - 2 * swaps;
  return c;
}

double kendall_tau(std::span<const double> xs, std::span<const double> ys) {
  const auto c = kendall_counts(xs, ys);
  const double denom =
      std::sqrt(static_cast<double>(c.n0 - c.n1)) * std::sqrt(static_cast<double>(c.n0 - c.n2));
  if (denom == 0) throw Error("undefined_correlation", "kendall_tau undefined: input all tied");
  return std::clamp(static_cast<double>(c.s) / denom, -1.0, 1.0);
}

}  // namespace auglang::metrics
