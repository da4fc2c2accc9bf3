#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "auglang/codec/augmented.hpp"
#include "auglang/codec/schema.hpp"

namespace auglang::conditioning {

enum class ConditioningMode { kIntent, kWords, kSpan, kMultiSpans };

// "intent", "words", "span", "multi_spans"
std::string_view to_string(ConditioningMode mode);
ConditioningMode parse_conditioning_mode(std::string_view name);

struct MaskPolicy {
  double word_mask_rate = 0.15;
  int span_len_min = 1;
  int span_len_max = 5;
  int num_spans_min = 2;
  int num_spans_max = 4;
  std::string sentinel = "<mask>";

  // Throws Error("invalid_mask_policy") on out-of-range values.
  void validate() const;
};

struct ConditioningInput {
  ConditioningMode mode = ConditioningMode::kIntent;
  std::string text;
  std::optional<std::size_t> source_index;  // absent in intent mode
  std::uint64_t seed = 0;

  friend bool operator==(const ConditioningInput&, const ConditioningInput&) = default;
};

/// Mixes a base seed with an index into an independent per-item seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Intent-only prompt: the augmented header with an empty body.
/// `intent` is the normalized intent name and must be in the schema.
ConditioningInput intent_condition(std::string_view intent, const codec::SlotSchema& schema);

/// `count` intent prompts with intents drawn uniformly from the schema.
std::vector<ConditioningInput> sample_intent_conditions(const codec::SlotSchema& schema,
                                                        std::size_t count, std::uint64_t seed);

/// Replaces each utterance token independently with the sentinel at
/// `policy.word_mask_rate`, conditioned on at least one token being masked.
/// Header, markers and slot labels are never touched.
ConditioningInput mask_words(const codec::AugmentedSentence& aug, const codec::SlotSchema& schema,
                             const MaskPolicy& policy, std::uint64_t seed);

/// Replaces one contiguous run of utterance tokens, kept within a single
/// marker-free segment, by one sentinel.
ConditioningInput mask_span(const codec::AugmentedSentence& aug, const codec::SlotSchema& schema,
                            const MaskPolicy& policy, std::uint64_t seed);

/// Replaces k non-overlapping, non-adjacent runs, each by its own sentinel.
/// k is uniform in [num_spans_min, num_spans_max], reduced to what the
/// utterance can hold.
ConditioningInput mask_multi_spans(const codec::AugmentedSentence& aug,
                                   const codec::SlotSchema& schema, const MaskPolicy& policy,
                                   std::uint64_t seed);

/// Exactly `count_per_intent` prompts for every schema intent, intent-major
/// in schema order. Masked modes draw source examples uniformly with
/// replacement from the intent's examples; per-prompt seeds come from
/// derive_seed(seed, prompt_index).
std::vector<ConditioningInput> build_requests(const std::vector<codec::LabeledExample>& corpus,
                                              const codec::SlotSchema& schema,
                                              ConditioningMode mode, std::size_t count_per_intent,
                                              const MaskPolicy& policy, std::uint64_t seed);

// Prompt file: JSONL with `mode`, `text`, `source_index` (null in intent
// mode) and `seed`.
void write_prompts(std::ostream& out, const std::vector<ConditioningInput>& prompts);
std::vector<ConditioningInput> read_prompts(std::istream& in);
void write_prompts_file(const std::filesystem::path& path,
                        const std::vector<ConditioningInput>& prompts);
std::vector<ConditioningInput> read_prompts_file(const std::filesystem::path& path);

}  // namespace auglang::conditioning
