#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "auglang/codec/schema.hpp"

namespace auglang::pipeline {

/// Examples kept for an intent with n examples: max(1, round(ratio * n)).
std::size_t per_intent_target(std::size_t n, double ratio);

/// Uniform sampling without replacement inside every intent class, keeping
/// the input order of the survivors. Throws "empty_input" for an empty corpus
/// and "invalid_argument" unless 0 < ratio <= 1.
std::vector<codec::LabeledExample> subsample_per_intent(
    const std::vector<codec::LabeledExample>& corpus, double ratio, std::uint64_t seed);

}  // namespace auglang::pipeline
