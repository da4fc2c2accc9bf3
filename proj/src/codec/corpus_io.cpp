#include "auglang/codec/corpus_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "json.hpp"

#include "auglang/error.hpp"

namespace auglang::codec {
namespace {

using nlohmann::json;

std::string_view trim_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

Provenance parse_provenance(std::string_view value, std::size_t line_no) {
  if (value == "real") return Provenance::kReal;
  if (value == "synthetic") return Provenance::kSynthetic;
  throw Error("corpus_format", "line " + std::to_string(line_no) + ": unknown provenance '" +
                                   std::string(value) + "'");
}

void finish_entry(CorpusEntry& entry, const ReadOptions& options, std::size_t line_no) {
  if (entry.example.tokens.empty()) {
    throw Error("corpus_format",
                "block ending at line " + std::to_string(line_no) + " has no tokens");
  }
  if (entry.example.intent.empty()) {
    throw Error("corpus_format",
                "block ending at line " + std::to_string(line_no) + " has no intent");
  }
  if (options.repair) entry.example.tags = repair_bio(entry.example.tags);
}

std::vector<CorpusEntry> read_conll(std::istream& in, const ReadOptions& options) {
  std::vector<CorpusEntry> out;
  CorpusEntry current;
  bool in_block = false;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim_cr(raw);
    if (trim(line).empty()) {
      if (in_block) {
        finish_entry(current, options, line_no);
        out.push_back(std::move(current));
        current = CorpusEntry{};
        in_block = false;
      }
      continue;
    }
    in_block = true;
    // Token lines always carry a tab, so a "#" token is not mistaken for a comment.
    if (starts_with(line, "#") && line.find('\t') == std::string_view::npos) {
      auto body = trim(line.substr(1));
      const auto eq = body.find('=');
      if (eq == std::string_view::npos) continue;
      const auto key = trim(body.substr(0, eq));
      const auto value = trim(body.substr(eq + 1));
      if (key == "intent") {
        current.example.intent = std::string(value);
      } else if (key == "provenance") {
        current.provenance = parse_provenance(value, line_no);
      }
      continue;
    }
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw Error("corpus_format",
                  "line " + std::to_string(line_no) + ": expected 'token<TAB>tag'");
    }
    current.example.tokens.emplace_back(line.substr(0, tab));
    current.example.tags.emplace_back(trim(line.substr(tab + 1)));
  }
  if (in_block) {
    finish_entry(current, options, line_no);
    out.push_back(std::move(current));
  }
  return out;
}

std::vector<CorpusEntry> read_jsonl(std::istream& in, const ReadOptions& options) {
  std::vector<CorpusEntry> out;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (trim(trim_cr(raw)).empty()) continue;
    CorpusEntry entry;
    try {
      const json obj = json::parse(raw);
      entry.example.tokens = obj.at("tokens").get<std::vector<std::string>>();
      entry.example.tags = obj.at("tags").get<std::vector<std::string>>();
      entry.example.intent = obj.at("intent").get<std::string>();
      if (obj.contains("provenance") && !obj["provenance"].is_null()) {
        entry.provenance = parse_provenance(obj["provenance"].get<std::string>(), line_no);
      }
    } catch (const json::exception& e) {
      throw Error("corpus_format", "line " + std::to_string(line_no) + ": " + e.what());
    }
    if (entry.example.tokens.size() != entry.example.tags.size()) {
      throw Error("corpus_format",
                  "line " + std::to_string(line_no) + ": tokens and tags differ in length");
    }
    finish_entry(entry, options, line_no);
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace

CorpusFormat parse_corpus_format(std::string_view name) {
  if (name == "conll") return CorpusFormat::kConll;
  if (name == "jsonl") return CorpusFormat::kJsonl;
  throw Error("invalid_argument", "unknown corpus format '" + std::string(name) + "'");
}

CorpusFormat guess_corpus_format(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  return (ext == ".jsonl" || ext == ".json") ? CorpusFormat::kJsonl : CorpusFormat::kConll;
}

std::string_view to_string(Provenance provenance) {
  return provenance == Provenance::kReal ? "real" : "synthetic";
}

std::vector<CorpusEntry> read_corpus(std::istream& in, CorpusFormat format,
                                     const ReadOptions& options) {
  return format == CorpusFormat::kConll ? read_conll(in, options) : read_jsonl(in, options);
}

std::vector<CorpusEntry> read_corpus_file(const std::filesystem::path& path,
                                          std::optional<CorpusFormat> format,
                                          const ReadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("file_not_found", "cannot open corpus '" + path.string() + "'");
  return read_corpus(in, format.value_or(guess_corpus_format(path)), options);
}

void write_corpus(std::ostream& out, const std::vector<CorpusEntry>& corpus,
                  CorpusFormat format) {
  if (format == CorpusFormat::kJsonl) {
    for (const auto& entry : corpus) {
      json obj;
      obj["tokens"] = entry.example.tokens;
      obj["tags"] = entry.example.tags;
      obj["intent"] = entry.example.intent;
      if (entry.provenance) obj["provenance"] = std::string(to_string(*entry.provenance));
      out << obj.dump() << '\n';
    }
    return;
  }
  bool first = true;
  for (const auto& entry : corpus) {
    if (!first) out << '\n';
    first = false;
    out << "# intent = " << entry.example.intent << '\n';
    if (entry.provenance) out << "# provenance = " << to_string(*entry.provenance) << '\n';
    for (std::size_t i = 0; i < entry.example.tokens.size(); ++i) {
      out << entry.example.tokens[i] << '\t' << entry.example.tags[i] << '\n';
    }
  }
}

void write_corpus_file(const std::filesystem::path& path, const std::vector<CorpusEntry>& corpus,
                       CorpusFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("io_error", "cannot write '" + path.string() + "'");
  write_corpus(out, corpus, format);
}

std::vector<LabeledExample> examples_of(const std::vector<CorpusEntry>& corpus) {
  std::vector<LabeledExample> out;
  out.reserve(corpus.size());
  for (const auto& entry : corpus) out.push_back(entry.example);
  return out;
}

std::vector<CorpusEntry> entries_of(const std::vector<LabeledExample>& examples,
                                    std::optional<Provenance> provenance) {
  std::vector<CorpusEntry> out;
  out.reserve(examples.size());
  for (const auto& ex : examples) out.push_back({ex, provenance});
  return out;
}

SlotSchema read_schema_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("file_not_found", "cannot open schema '" + path.string() + "'");
  try {
    const json obj = json::parse(in);
    return SlotSchema(obj.at("intents").get<std::vector<std::string>>(),
                      obj.value("slot_types", std::vector<std::string>{}));
  } catch (const json::exception& e) {
    throw Error("schema_format", "schema '" + path.string() + "': " + e.what());
  }
}

void write_schema_file(const std::filesystem::path& path, const SlotSchema& schema) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("io_error", "cannot write '" + path.string() + "'");
  json obj;
  obj["intents"] = schema.intents();
  obj["slot_types"] = schema.slot_types();
  out << obj.dump(2) << '\n';
}

}  // namespace auglang::codec
