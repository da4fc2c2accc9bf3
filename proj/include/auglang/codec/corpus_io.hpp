#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "auglang/codec/schema.hpp"

namespace auglang::codec {

// CoNLL-style corpus: one block per example, separated by blank lines.
//
//   # intent = PlayMusic
//   # provenance = synthetic      (optional)
//   play<TAB>O
//   muse<TAB>B-artist
//
// JSONL: one object per line with `tokens`, `tags`, `intent` and an optional
// `provenance` string.
enum class CorpusFormat { kConll, kJsonl };

/// "conll" or "jsonl"; also guesses from a file extension (".jsonl"/".json"
/// mean JSONL, everything else CoNLL).
CorpusFormat parse_corpus_format(std::string_view name);
CorpusFormat guess_corpus_format(const std::filesystem::path& path);

enum class Provenance { kReal, kSynthetic };
std::string_view to_string(Provenance provenance);

struct CorpusEntry {
  LabeledExample example;
  std::optional<Provenance> provenance;

  friend bool operator==(const CorpusEntry&, const CorpusEntry&) = default;
};

struct ReadOptions {
  // Promote stray I- tags to B- instead of rejecting the file.
  bool repair = false;
};

std::vector<CorpusEntry> read_corpus(std::istream& in, CorpusFormat format,
                                     const ReadOptions& options = {});
std::vector<CorpusEntry> read_corpus_file(const std::filesystem::path& path,
                                          std::optional<CorpusFormat> format = std::nullopt,
                                          const ReadOptions& options = {});

void write_corpus(std::ostream& out, const std::vector<CorpusEntry>& corpus, CorpusFormat format);
void write_corpus_file(const std::filesystem::path& path, const std::vector<CorpusEntry>& corpus,
                       CorpusFormat format);

std::vector<LabeledExample> examples_of(const std::vector<CorpusEntry>& corpus);
std::vector<CorpusEntry> entries_of(const std::vector<LabeledExample>& examples,
                                    std::optional<Provenance> provenance = std::nullopt);

// Schema JSON: {"intents": [...], "slot_types": [...]}
SlotSchema read_schema_file(const std::filesystem::path& path);
void write_schema_file(const std::filesystem::path& path, const SlotSchema& schema);

}  // namespace auglang::codec
