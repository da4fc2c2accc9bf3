#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "auglang/codec/schema.hpp"
#include "auglang/error.hpp"

namespace auglang::codec {

// Augmented-language format, whitespace tokenized:
//
//   intent : <normalized intent> ; <body>
//
// where the body is the utterance with every slot span written as
// `[ <tokens> : <normalized slot type> ]`. Utterance tokens escape the
// reserved characters [ ] : ; and \ with a preceding backslash.

struct AugmentedSentence {
  std::string text;

  friend bool operator==(const AugmentedSentence&, const AugmentedSentence&) = default;
};

enum class CodecErrc {
  kMissingIntentHeader,
  kDuplicateIntentHeader,
  kUnbalancedMarkers,
  kMalformedSpan,
  kEmptySpan,
  kMalformedToken,
  kEmptyUtterance,
  kUnknownIntent,
  kUnknownSlotType,
};

/// Stable snake_case name, e.g. "malformed_span". Used as the rejection
/// reason in filter reports.
std::string_view to_string(CodecErrc errc);

inline constexpr CodecErrc kAllCodecErrcs[] = {
    CodecErrc::kMissingIntentHeader, CodecErrc::kDuplicateIntentHeader,
    CodecErrc::kUnbalancedMarkers,   CodecErrc::kMalformedSpan,
    CodecErrc::kEmptySpan,           CodecErrc::kMalformedToken,
    CodecErrc::kEmptyUtterance,      CodecErrc::kUnknownIntent,
    CodecErrc::kUnknownSlotType,
};

class CodecError : public Error {
 public:
  CodecError(CodecErrc errc, const std::string& message)
      : Error(std::string(to_string(errc)), message), errc_(errc) {}

  CodecErrc errc() const noexcept { return errc_; }

 private:
  CodecErrc errc_;
};

/// Serializes a labeled example. Throws BioError (with the offending index)
/// when the tags break the BIO rules and Error for other invariant failures.
AugmentedSentence encode(const LabeledExample& example, const SlotSchema& schema);

/// Parses an augmented sentence back into BIO form. Accepts any string;
/// failures are reported as CodecError.
LabeledExample decode(const AugmentedSentence& aug, const SlotSchema& schema);

/// Non-throwing variant of decode.
std::variant<LabeledExample, CodecError> try_decode(std::string_view text,
                                                    const SlotSchema& schema);

std::string escape_token(std::string_view token);

enum class SurfaceRole {
  kHeader,     // "intent", ":", the intent words and ";"
  kMarker,     // span brackets and the span's ":"
  kSlotLabel,  // slot-type words inside a span
  kUtterance,  // utterance tokens (escaped form)
};

struct SurfaceToken {
  std::string text;
  SurfaceRole role;
  // Index of the maximal marker-free run of utterance tokens this token
  // belongs to; -1 for non-utterance tokens.
  int segment = -1;
};

/// Splits a decodable augmented sentence into its surface tokens with their
/// structural roles. Throws CodecError if `aug` does not decode.
std::vector<SurfaceToken> surface_tokens(const AugmentedSentence& aug, const SlotSchema& schema);

std::string join_surface(const std::vector<SurfaceToken>& tokens);

}  // namespace auglang::codec
