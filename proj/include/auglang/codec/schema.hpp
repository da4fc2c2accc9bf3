#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "auglang/error.hpp"

namespace auglang::codec {

/// One utterance with per-token BIO slot tags and a single intent label.
/// Tags and intent carry raw corpus names, e.g. "B-playlist_owner".
struct LabeledExample {
  std::vector<std::string> tokens;
  std::vector<std::string> tags;
  std::string intent;

  friend bool operator==(const LabeledExample&, const LabeledExample&) = default;
};

// Violation of the BIO tagging rules. `index()` is the offending token position.
class BioError : public Error {
 public:
  BioError(std::size_t index, const std::string& message)
      : Error("invalid_bio", message), index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

/// The label vocabularies of a corpus: intents and slot types, both kept in
/// insertion order under their raw names, each with a normalized form that
/// must be unique.
class SlotSchema {
 public:
  SlotSchema(std::vector<std::string> intents, std::vector<std::string> slot_types);

  const std::vector<std::string>& intents() const noexcept { return intents_; }
  const std::vector<std::string>& slot_types() const noexcept { return slot_types_; }

  bool has_intent(std::string_view raw) const;
  bool has_slot_type(std::string_view raw) const;

  // Normalized form of a raw name known to the schema.
  const std::string& normalized_intent(std::string_view raw) const;
  const std::string& normalized_slot_type(std::string_view raw) const;

  // Raw name for a normalized form, if the schema knows it.
  std::optional<std::string> intent_from_normalized(std::string_view normalized) const;
  std::optional<std::string> slot_type_from_normalized(std::string_view normalized) const;

  friend bool operator==(const SlotSchema& a, const SlotSchema& b) {
    return a.intents_ == b.intents_ && a.slot_types_ == b.slot_types_;
  }

 private:
  std::vector<std::string> intents_;
  std::vector<std::string> slot_types_;
  std::map<std::string, std::string, std::less<>> intent_norm_;     // raw -> normalized
  std::map<std::string, std::string, std::less<>> intent_raw_;      // normalized -> raw
  std::map<std::string, std::string, std::less<>> slot_norm_;
  std::map<std::string, std::string, std::less<>> slot_raw_;
};

/// Builds the schema covering every intent and slot type seen in `corpus`,
/// in order of first appearance.
SlotSchema infer_schema(const std::vector<LabeledExample>& corpus);

/// Checks the LabeledExample invariants against `schema`. Throws BioError for
/// tag-structure problems and Error("invalid_example") for the rest.
void validate_example(const LabeledExample& example, const SlotSchema& schema);

/// Promotes stray "I-x" tags (not continuing an x span) to "B-x".
std::vector<std::string> repair_bio(const std::vector<std::string>& tags);

// Tag helpers. `tag_type("B-city")` is "city"; "O" has no type.
enum class TagKind { kOutside, kBegin, kInside };
TagKind tag_kind(std::string_view tag);
std::string_view tag_type(std::string_view tag);

}  // namespace auglang::codec
