#include "auglang/pipeline/assemble.hpp"

#include <string>

#include "auglang/error.hpp"

namespace auglang::pipeline {
namespace {

void check(const std::vector<codec::LabeledExample>& examples, const codec::SlotSchema& schema,
           const char* what) {
  for (std::size_t i = 0; i < examples.size(); ++i) {
    try {
      codec::validate_example(examples[i], schema);
    } catch (const Error& e) {
      throw Error("schema_mismatch",
                  std::string(what) + " example " + std::to_string(i) + ": " + e.what());
    }
  }
}

}  // namespace

std::vector<codec::CorpusEntry> assemble_augmented_set(
    const std::vector<codec::LabeledExample>& real, const codec::SlotSchema& real_schema,
    const std::vector<codec::LabeledExample>& synthetic,
    const codec::SlotSchema& synthetic_schema) {
  if (!(real_schema == synthetic_schema)) {
    throw Error("schema_mismatch", "real and synthetic data use different schemas");
  }
  check(real, real_schema, "real");
  check(synthetic, real_schema, "synthetic");
  auto out = codec::entries_of(real, codec::Provenance::kReal);
  const auto syn = codec::entries_of(synthetic, codec::Provenance::kSynthetic);
  out.insert(out.end(), syn.begin(), syn.end());
  return out;
}

}  // namespace auglang::pipeline
