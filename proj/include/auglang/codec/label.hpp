#pragma once

#include <string>
#include <string_view>

namespace auglang::codec {

/// Turns a raw corpus label ("playlist_owner", "AddToPlaylist",
/// "fromloc.city_name") into space-separated lowercase words.
///
/// Word boundaries are underscores, dots, hyphens, whitespace and
/// lower-to-upper camel-case transitions. The result is idempotent under a
/// second application. Throws auglang::Error("invalid_label") when the input
/// is empty or contains no word characters.
std::string normalize_label(std::string_view raw);

/// True when `label` consists of word characters separated by single spaces
/// with no leading or trailing space. Word characters are ASCII lowercase
/// letters, digits and non-ASCII bytes.
bool is_normalized_label(std::string_view label);

}  // namespace auglang::codec
