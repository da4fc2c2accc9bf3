#include "auglang/pipeline/subsample.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <map>
#include <random>
#include <string>

#include "auglang/error.hpp"

namespace auglang::pipeline {

std::size_t per_intent_target(std::size_t n, double ratio) {
  const auto r = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(n)));
  return std::clamp<std::size_t>(r, 1, n);
}

std::vector<codec::LabeledExample> subsample_per_intent(
    const std::vector<codec::LabeledExample>& corpus, double ratio, std::uint64_t seed) {
  if (corpus.empty()) throw Error("empty_input", "cannot subsample an empty corpus");
  if (!(ratio > 0 && ratio <= 1)) {
    throw Error("invalid_argument", "sampling ratio must lie in (0, 1], got " + std::to_string(ratio));
  }
  // Intents in first-appearance order so the RNG stream does not depend on names.
  std::vector<std::string> order;
  std::map<std::string, std::vector<std::size_t>> by_intent;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    auto [it, fresh] = by_intent.try_emplace(corpus[i].intent);
    if (fresh) order.push_back(corpus[i].intent);
    it->second.push_back(i);
  }
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> keep;
  for (const auto& intent : order) {
    const auto& idx = by_intent[intent];
    std::sample(idx.begin(), idx.end(), std::back_inserter(keep),
                per_intent_target(idx.size(), ratio), rng);
  }
  std::sort(keep.begin(), keep.end());
  std::vector<codec::LabeledExample> out;
  out.reserve(keep.size());
  for (const auto i : keep) out.push_back(corpus[i]);
  return out;
}

}  // namespace auglang::pipeline
