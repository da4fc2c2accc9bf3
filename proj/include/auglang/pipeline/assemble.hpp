#pragma once

#include <vector>

#include "auglang/codec/corpus_io.hpp"
#include "auglang/codec/schema.hpp"

namespace auglang::pipeline {

/// Real examples followed by synthetic ones, each tagged with its provenance.
/// Throws "schema_mismatch" when the two schemas differ or an example does
/// not validate against the shared schema.
std::vector<codec::CorpusEntry> assemble_augmented_set(
    const std::vector<codec::LabeledExample>& real, const codec::SlotSchema& real_schema,
    const std::vector<codec::LabeledExample>& synthetic, const codec::SlotSchema& synthetic_schema);

}  // namespace auglang::pipeline
