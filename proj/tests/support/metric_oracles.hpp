#pragma once

// Slow reference implementations for the text and ranking metrics.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "auglang/metrics/bleu.hpp"
#include "auglang/metrics/kendall.hpp"

namespace auglang::testing {

inline metrics::TokenSeq words(const std::string& s) {
  std::istringstream in(s);
  metrics::TokenSeq out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

inline Eigen::MatrixXd random_matrix(std::mt19937_64& rng, int n, int d, double scale = 1.0) {
  std::normal_distribution<double> g(0, scale);
  Eigen::MatrixXd m(n, d);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < d; ++j) m(i, j) = g(rng);
  }
  return m;
}

// Straightforward BLEU: explicit n-gram vectors, clipping against each
// reference separately, linear scan for the closest reference length.
inline double naive_bleu(const std::vector<metrics::TokenSeq>& cands,
                         const std::vector<metrics::TokenSeq>& refs, double eps = 1e-9) {
  using Gram = std::vector<std::string>;
  auto grams = [](const metrics::TokenSeq& s, std::size_t n) {
    std::map<Gram, int> m;
    for (std::size_t i = 0; i + n <= s.size(); ++i) ++m[Gram(s.begin() + i, s.begin() + i + n)];
    return m;
  };
  double match[4] = {}, total[4] = {}, c = 0, r = 0;
  for (const auto& cand : cands) {
    for (std::size_t n = 1; n <= 4; ++n) {
      for (const auto& [g, cnt] : grams(cand, n)) {
        int best = 0;
        for (const auto& ref : refs) {
          const auto m = grams(ref, n);
          const auto it = m.find(g);
          if (it != m.end()) best = std::max(best, it->second);
        }
        match[n - 1] += std::min(cnt, best);
        total[n - 1] += cnt;
      }
    }
    c += cand.size();
    std::size_t closest = refs[0].size();
    for (const auto& ref : refs) {
      const auto gap = [&](std::size_t l) { return l > cand.size() ? l - cand.size() : cand.size() - l; };
      if (gap(ref.size()) < gap(closest) ||
          (gap(ref.size()) == gap(closest) && ref.size() < closest)) {
        closest = ref.size();
      }
    }
    r += closest;
  }
  double lg = 0;
  for (int n = 0; n < 4; ++n) lg += std::log(match[n] > 0 ? match[n] / total[n] : eps);
  const double bp = c < r ? std::exp(1 - r / c) : 1.0;
  return bp * std::exp(lg / 4);
}

inline double naive_self_bleu(const std::vector<metrics::TokenSeq>& corpus) {
  double sum = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    std::vector<metrics::TokenSeq> others;
    for (std::size_t j = 0; j < corpus.size(); ++j) {
      if (j != i) others.push_back(corpus[j]);
    }
    sum += naive_bleu({corpus[i]}, others);
  }
  return sum / static_cast<double>(corpus.size());
}

inline metrics::KendallCounts enumerate_pairs(const std::vector<double>& x,
                                              const std::vector<double>& y) {
  metrics::KendallCounts c;
  const auto n = static_cast<std::int64_t>(x.size());
  c.n0 = n * (n - 1) / 2;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const double dx = x[i] - x[j], dy = y[i] - y[j];
      if (dx == 0) ++c.n1;
      if (dy == 0) ++c.n2;
      if (dx * dy > 0) ++c.s;
      if (dx * dy < 0) --c.s;
    }
  }
  return c;
}

}  // namespace auglang::testing
