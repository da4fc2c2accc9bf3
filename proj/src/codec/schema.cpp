#include "auglang/codec/schema.hpp"

#include <set>

#include "auglang/codec/label.hpp"

namespace auglang::codec {
namespace {

void register_names(const std::vector<std::string>& names, const char* what,
                    std::map<std::string, std::string, std::less<>>& to_norm,
                    std::map<std::string, std::string, std::less<>>& to_raw) {
  for (const auto& raw : names) {
    std::string norm = normalize_label(raw);
    if (!is_normalized_label(norm)) {
      throw Error("invalid_schema", std::string(what) + " '" + raw +
                                        "' normalizes to '" + norm +
                                        "', which contains non-word characters");
    }
    if (to_norm.count(raw) != 0) {
      throw Error("invalid_schema", std::string("duplicate ") + what + " '" + raw + "'");
    }
    auto [it, inserted] = to_raw.emplace(norm, raw);
    if (!inserted) {
      throw Error("invalid_schema", std::string(what) + "s '" + it->second + "' and '" +
                                        raw + "' both normalize to '" + norm + "'");
    }
    to_norm.emplace(raw, std::move(norm));
  }
}

bool has_whitespace(std::string_view s) {
  for (const char c : s) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f') return true;
  }
  return false;
}

}  // namespace

SlotSchema::SlotSchema(std::vector<std::string> intents, std::vector<std::string> slot_types)
    : intents_(std::move(intents)), slot_types_(std::move(slot_types)) {
  if (intents_.empty()) {
    throw Error("invalid_schema", "schema needs at least one intent");
  }
  register_names(intents_, "intent", intent_norm_, intent_raw_);
  register_names(slot_types_, "slot type", slot_norm_, slot_raw_);
}

bool SlotSchema::has_intent(std::string_view raw) const {
  return intent_norm_.find(raw) != intent_norm_.end();
}

bool SlotSchema::has_slot_type(std::string_view raw) const {
  return slot_norm_.find(raw) != slot_norm_.end();
}

const std::string& SlotSchema::normalized_intent(std::string_view raw) const {
  auto it = intent_norm_.find(raw);
  if (it == intent_norm_.end()) {
    throw Error("unknown_intent", "intent '" + std::string(raw) + "' is not in the schema");
  }
  return it->second;
}

const std::string& SlotSchema::normalized_slot_type(std::string_view raw) const {
  auto it = slot_norm_.find(raw);
  if (it == slot_norm_.end()) {
    throw Error("unknown_slot_type",
                "slot type '" + std::string(raw) + "' is not in the schema");
  }
  return it->second;
}

std::optional<std::string> SlotSchema::intent_from_normalized(std::string_view normalized) const {
  auto it = intent_raw_.find(normalized);
  if (it == intent_raw_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> SlotSchema::slot_type_from_normalized(
    std::string_view normalized) const {
  auto it = slot_raw_.find(normalized);
  if (it == slot_raw_.end()) return std::nullopt;
  return it->second;
}

SlotSchema infer_schema(const std::vector<LabeledExample>& corpus) {
  std::vector<std::string> intents;
  std::vector<std::string> slots;
  std::set<std::string, std::less<>> seen_intents;
  std::set<std::string, std::less<>> seen_slots;
  for (const auto& ex : corpus) {
    if (seen_intents.insert(ex.intent).second) intents.push_back(ex.intent);
    for (const auto& tag : ex.tags) {
      if (tag_kind(tag) == TagKind::kOutside) continue;
      std::string type(tag_type(tag));
      if (seen_slots.insert(type).second) slots.push_back(std::move(type));
    }
  }
  return SlotSchema(std::move(intents), std::move(slots));
}

TagKind tag_kind(std::string_view tag) {
  if (tag == "O") return TagKind::kOutside;
  if (tag.size() > 2 && tag[1] == '-') {
    if (tag[0] == 'B') return TagKind::kBegin;
    if (tag[0] == 'I') return TagKind::kInside;
  }
  throw Error("invalid_bio", "malformed tag '" + std::string(tag) + "'");
}

std::string_view tag_type(std::string_view tag) {
  if (tag == "O") return {};
  return tag.substr(2);
}

void validate_example(const LabeledExample& example, const SlotSchema& schema) {
  if (example.tokens.size() != example.tags.size()) {
    throw Error("invalid_example", "example has " + std::to_string(example.tokens.size()) +
                                       " tokens but " + std::to_string(example.tags.size()) +
                                       " tags");
  }
  if (example.tokens.empty()) {
    throw Error("invalid_example", "example has no tokens");
  }
  if (!schema.has_intent(example.intent)) {
    throw Error("unknown_intent", "intent '" + example.intent + "' is not in the schema");
  }
  for (std::size_t i = 0; i < example.tokens.size(); ++i) {
    const auto& token = example.tokens[i];
    if (token.empty() || has_whitespace(token)) {
      throw Error("invalid_example",
                  "token " + std::to_string(i) + " is empty or contains whitespace");
    }
  }
  std::string_view open_type;
  bool in_span = false;
  for (std::size_t i = 0; i < example.tags.size(); ++i) {
    const auto& tag = example.tags[i];
    TagKind kind;
    try {
      kind = tag_kind(tag);
    } catch (const Error&) {
      throw BioError(i, "malformed tag '" + tag + "' at index " + std::to_string(i));
    }
    if (kind == TagKind::kOutside) {
      in_span = false;
      continue;
    }
    const auto type = tag_type(tag);
    if (!schema.has_slot_type(type)) {
      throw BioError(i, "slot type '" + std::string(type) + "' at index " +
                            std::to_string(i) + " is not in the schema");
    }
    if (kind == TagKind::kInside && (!in_span || open_type != type)) {
      throw BioError(i, "tag '" + tag + "' at index " + std::to_string(i) +
                            " does not continue a span of the same type");
    }
    in_span = true;
    open_type = type;
  }
}

std::vector<std::string> repair_bio(const std::vector<std::string>& tags) {
  std::vector<std::string> out = tags;
  std::string_view open_type;
  bool in_span = false;
  for (auto& tag : out) {
    const auto kind = tag_kind(tag);
    if (kind == TagKind::kOutside) {
      in_span = false;
      continue;
    }
    if (kind == TagKind::kInside && (!in_span || open_type != tag_type(tag))) {
      tag[0] = 'B';
    }
    in_span = true;
    open_type = tag_type(tag);
  }
  return out;
}

}  // namespace auglang::codec
