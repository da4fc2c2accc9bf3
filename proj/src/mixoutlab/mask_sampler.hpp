#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace auglang::mixoutlab::detail {

// Bernoulli(mu) draws from the two 32-bit halves of one 64-bit word.
class MaskSampler {
 public:
  MaskSampler(double mu, std::uint64_t seed)
      : rng_(seed), threshold_(static_cast<std::uint64_t>(std::ldexp(mu, 32))) {}

  template <typename F>
  void fill(Eigen::Index n, F&& set) {
    for (Eigen::Index i = 0; i < n; i += 2) {
      const std::uint64_t r = rng_();
      set(i, (r & 0xffffffffu) < threshold_);
      if (i + 1 < n) set(i + 1, (r >> 32) < threshold_);
    }
  }

 private:
  std::mt19937_64 rng_;
  std::uint64_t threshold_;
};

}  // namespace auglang::mixoutlab::detail
