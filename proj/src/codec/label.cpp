#include "auglang/codec/label.hpp"

#include <vector>

#include "auglang/error.hpp"

namespace auglang::codec {
namespace {

bool is_separator(char c) {
  return c == '_' || c == '.' || c == '-' || c == ' ' || c == '\t' ||
         c == '\n' || c == '\r';
}

bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }

char to_lower(char c) { return is_upper(c) ? static_cast<char>(c - 'A' + 'a') : c; }

bool is_word_char(char c) {
  const auto u = static_cast<unsigned char>(c);
  return is_lower(c) || (c >= '0' && c <= '9') || u >= 0x80;
}

}  // namespace

std::string normalize_label(std::string_view raw) {
  if (raw.empty()) {
    throw Error("invalid_label", "label is empty");
  }
  std::vector<std::string> words;
  std::string current;
  char prev = '\0';
  for (const char c : raw) {
    if (is_separator(c)) {
      if (!current.empty()) words.push_back(std::move(current));
      current.clear();
    } else {
      if (is_upper(c) && is_lower(prev) && !current.empty()) {
        words.push_back(std::move(current));
        current.clear();
      }
      current.push_back(to_lower(c));
    }
    prev = c;
  }
  if (!current.empty()) words.push_back(std::move(current));
  if (words.empty()) {
    throw Error("invalid_label", "label '" + std::string(raw) + "' has no words");
  }
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i != 0) out.push_back(' ');
    out += words[i];
  }
  return out;
}

bool is_normalized_label(std::string_view label) {
  if (label.empty() || label.front() == ' ' || label.back() == ' ') return false;
  char prev = '\0';
  for (const char c : label) {
    if (c == ' ') {
      if (prev == ' ') return false;
    } else if (!is_word_char(c)) {
      return false;
    }
    prev = c;
  }
  return true;
}

}  // namespace auglang::codec
