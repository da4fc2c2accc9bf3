#include "auglang/codec/augmented.hpp"

#include <optional>

namespace auglang::codec {
namespace {

constexpr std::string_view kIntentKeyword = "intent";

bool is_reserved(char c) { return c == '[' || c == ']' || c == ':' || c == ';' || c == '\\'; }

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

std::vector<std::string_view> split_ws(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) out.push_back(text.substr(start, i - start));
  }
  return out;
}

std::string join_words(const std::vector<std::string_view>& words) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i != 0) out.push_back(' ');
    out.append(words[i]);
  }
  return out;
}

std::optional<std::string> unescape_token(std::string_view token) {
  std::string out;
  out.reserve(token.size());
  for (std::size_t i = 0; i < token.size(); ++i) {
    const char c = token[i];
    if (c == '\\') {
      if (i + 1 >= token.size() || !is_reserved(token[i + 1])) return std::nullopt;
      out.push_back(token[++i]);
    } else if (is_reserved(c)) {
      return std::nullopt;
    } else {
      out.push_back(c);
    }
  }
  return out;
}

struct ParsedSpan {
  std::size_t first_token;
  std::size_t token_count;
  std::vector<std::string_view> type_words;
};

struct Parsed {
  std::vector<std::string_view> intent_words;
  std::vector<std::string> tokens;  // unescaped utterance tokens
  std::vector<ParsedSpan> spans;
  std::vector<SurfaceToken> surface;
};

// Structural parse, schema-independent.
std::variant<Parsed, CodecError> parse(std::string_view text) {
  using E = CodecErrc;
  const auto toks = split_ws(text);
  if (toks.size() < 2 || toks[0] != kIntentKeyword || toks[1] != ":") {
    return CodecError(E::kMissingIntentHeader, "text does not start with 'intent :'");
  }
  Parsed p;
  p.surface.push_back({std::string(toks[0]), SurfaceRole::kHeader});
  p.surface.push_back({std::string(toks[1]), SurfaceRole::kHeader});
  std::size_t i = 2;
  for (; i < toks.size() && toks[i] != ";"; ++i) {
    const auto w = toks[i];
    if (w == "[" || w == "]" || w == ":") {
      return CodecError(E::kMissingIntentHeader, "marker '" + std::string(w) +
                                                     "' inside the intent header");
    }
    p.intent_words.push_back(w);
    p.surface.push_back({std::string(w), SurfaceRole::kHeader});
  }
  if (i == toks.size()) {
    return CodecError(E::kMissingIntentHeader, "intent header is not terminated by ';'");
  }
  if (p.intent_words.empty()) {
    return CodecError(E::kMissingIntentHeader, "intent header names no intent");
  }
  p.surface.push_back({";", SurfaceRole::kHeader});
  ++i;

  enum class State { kOutside, kSpanTokens, kSpanType };
  State state = State::kOutside;
  bool prev_was_bare_intent = false;
  int segment = -1;
  bool segment_open = false;
  ParsedSpan span{};
  for (; i < toks.size(); ++i) {
    const auto tok = toks[i];
    const bool bare_intent = state == State::kOutside && tok == kIntentKeyword;
    if (tok == "[") {
      if (state != State::kOutside) {
        return CodecError(E::kUnbalancedMarkers, "nested '[' at token " + std::to_string(i));
      }
      state = State::kSpanTokens;
      span = ParsedSpan{p.tokens.size(), 0, {}};
      segment_open = false;
      p.surface.push_back({"[", SurfaceRole::kMarker});
    } else if (tok == "]") {
      if (state == State::kOutside) {
        return CodecError(E::kUnbalancedMarkers, "unmatched ']' at token " + std::to_string(i));
      }
      if (state == State::kSpanTokens) {
        return CodecError(E::kMalformedSpan, "span closed at token " + std::to_string(i) +
                                                 " without ':' and slot type");
      }
      if (span.type_words.empty()) {
        return CodecError(E::kMalformedSpan, "span closed at token " + std::to_string(i) +
                                                 " without a slot type");
      }
      if (span.token_count == 0) {
        return CodecError(E::kEmptySpan, "span ending at token " + std::to_string(i) +
                                             " has no utterance tokens");
      }
      p.spans.push_back(std::move(span));
      state = State::kOutside;
      segment_open = false;
      p.surface.push_back({"]", SurfaceRole::kMarker});
    } else if (tok == ":") {
      if (state == State::kOutside) {
        if (prev_was_bare_intent) {
          return CodecError(E::kDuplicateIntentHeader,
                            "second 'intent :' header at token " + std::to_string(i - 1));
        }
        return CodecError(E::kMalformedSpan, "':' outside a span at token " + std::to_string(i));
      }
      if (state == State::kSpanType) {
        return CodecError(E::kMalformedSpan, "second ':' in span at token " + std::to_string(i));
      }
      state = State::kSpanType;
      segment_open = false;
      p.surface.push_back({":", SurfaceRole::kMarker});
    } else if (tok == ";") {
      return CodecError(E::kDuplicateIntentHeader,
                        "second header terminator ';' at token " + std::to_string(i));
    } else if (state == State::kSpanType) {
      span.type_words.push_back(tok);
      p.surface.push_back({std::string(tok), SurfaceRole::kSlotLabel});
    } else {
      auto unescaped = unescape_token(tok);
      if (!unescaped) {
        return CodecError(E::kMalformedToken, "token " + std::to_string(i) + " ('" +
                                                  std::string(tok) +
                                                  "') has an unescaped reserved character");
      }
      p.tokens.push_back(std::move(*unescaped));
      if (state == State::kSpanTokens) ++span.token_count;
      if (!segment_open) {
        ++segment;
        segment_open = true;
      }
      p.surface.push_back({std::string(tok), SurfaceRole::kUtterance, segment});
    }
    prev_was_bare_intent = bare_intent;
  }
  if (state != State::kOutside) {
    return CodecError(E::kUnbalancedMarkers, "span is not closed at end of text");
  }
  if (p.tokens.empty()) {
    return CodecError(E::kEmptyUtterance, "augmented sentence has no utterance tokens");
  }
  return p;
}

std::variant<LabeledExample, CodecError> to_example(const Parsed& p, const SlotSchema& schema) {
  const std::string intent_norm = join_words(p.intent_words);
  auto intent = schema.intent_from_normalized(intent_norm);
  if (!intent) {
    return CodecError(CodecErrc::kUnknownIntent,
                      "intent '" + intent_norm + "' is not in the schema");
  }
  LabeledExample ex;
  ex.intent = std::move(*intent);
  ex.tokens = p.tokens;
  ex.tags.assign(p.tokens.size(), "O");
  for (const auto& span : p.spans) {
    const std::string type_norm = join_words(span.type_words);
    auto type = schema.slot_type_from_normalized(type_norm);
    if (!type) {
      return CodecError(CodecErrc::kUnknownSlotType,
                        "slot type '" + type_norm + "' is not in the schema");
    }
    for (std::size_t k = 0; k < span.token_count; ++k) {
      ex.tags[span.first_token + k] = (k == 0 ? "B-" : "I-") + *type;
    }
  }
  return ex;
}

}  // namespace

std::string_view to_string(CodecErrc errc) {
  switch (errc) {
    case CodecErrc::kMissingIntentHeader: return "missing_intent_header";
    case CodecErrc::kDuplicateIntentHeader: return "duplicate_intent_header";
    case CodecErrc::kUnbalancedMarkers: return "unbalanced_markers";
    case CodecErrc::kMalformedSpan: return "malformed_span";
    case CodecErrc::kEmptySpan: return "empty_span";
    case CodecErrc::kMalformedToken: return "malformed_token";
    case CodecErrc::kEmptyUtterance: return "empty_utterance";
    case CodecErrc::kUnknownIntent: return "unknown_intent";
    case CodecErrc::kUnknownSlotType: return "unknown_slot_type";
  }
  return "unknown_error";
}

std::string escape_token(std::string_view token) {
  std::string out;
  out.reserve(token.size() + 2);
  for (const char c : token) {
    if (is_reserved(c)) out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

AugmentedSentence encode(const LabeledExample& example, const SlotSchema& schema) {
  validate_example(example, schema);
  std::string out = "intent : ";
  out += schema.normalized_intent(example.intent);
  out += " ;";
  const std::size_t n = example.tokens.size();
  for (std::size_t i = 0; i < n;) {
    if (tag_kind(example.tags[i]) == TagKind::kOutside) {
      out.push_back(' ');
      out += escape_token(example.tokens[i]);
      ++i;
      continue;
    }
    const auto type = tag_type(example.tags[i]);
    out += " [";
    do {
      out.push_back(' ');
      out += escape_token(example.tokens[i]);
      ++i;
    } while (i < n && tag_kind(example.tags[i]) == TagKind::kInside);
    out += " : ";
    out += schema.normalized_slot_type(type);
    out += " ]";
  }
  return {std::move(out)};
}

std::variant<LabeledExample, CodecError> try_decode(std::string_view text,
                                                    const SlotSchema& schema) {
  auto parsed = parse(text);
  if (auto* err = std::get_if<CodecError>(&parsed)) return std::move(*err);
  return to_example(std::get<Parsed>(parsed), schema);
}

LabeledExample decode(const AugmentedSentence& aug, const SlotSchema& schema) {
  auto result = try_decode(aug.text, schema);
  if (auto* err = std::get_if<CodecError>(&result)) throw std::move(*err);
  return std::get<LabeledExample>(std::move(result));
}

std::vector<SurfaceToken> surface_tokens(const AugmentedSentence& aug, const SlotSchema& schema) {
  auto parsed = parse(aug.text);
  if (auto* err = std::get_if<CodecError>(&parsed)) throw std::move(*err);
  auto& p = std::get<Parsed>(parsed);
  auto checked = to_example(p, schema);
  if (auto* err = std::get_if<CodecError>(&checked)) throw std::move(*err);
  return std::move(p.surface);
}

std::string join_surface(const std::vector<SurfaceToken>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i != 0) out.push_back(' ');
    out += tokens[i].text;
  }
  return out;
}

}  // namespace auglang::codec
