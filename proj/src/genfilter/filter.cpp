#include "auglang/genfilter/filter.hpp"

#include <fstream>
#include <unordered_set>
#include <variant>

#include "auglang/codec/augmented.hpp"
#include "auglang/error.hpp"

namespace auglang::genfilter {
namespace {

std::string example_key(const codec::LabeledExample& ex) {
  std::string key = ex.intent;
  key.push_back('\x1e');
  for (std::size_t i = 0; i < ex.tokens.size(); ++i) {
    key += ex.tokens[i];
    key.push_back('\x1f');
    key += ex.tags[i];
    key.push_back('\x1e');
  }
  return key;
}

}  // namespace

std::size_t FilterReport::rejected() const {
  std::size_t n = 0;
  for (const auto& [reason, count] : rejected_counts) n += count;
  return n;
}

nlohmann::ordered_json FilterReport::summary_json() const {
  nlohmann::ordered_json out;
  out["total"] = total;
  out["accepted"] = accepted.size();
  out["rejected"] = nlohmann::ordered_json::object();
  for (const auto& [reason, count] : rejected_counts) out["rejected"][reason] = count;
  return out;
}

FilterReport filter_generations(std::span<const std::string> lines,
                                const codec::SlotSchema& schema, const FilterOptions& options) {
  FilterReport report;
  report.total = lines.size();
  std::unordered_set<std::string> training_keys;
  if (options.dedup_training) {
    for (const auto& ex : options.training) training_keys.insert(example_key(ex));
  }
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto decoded = codec::try_decode(lines[i], schema);
    if (const auto* err = std::get_if<codec::CodecError>(&decoded)) {
      ++report.rejected_counts[err->code()];
      continue;
    }
    auto& ex = std::get<codec::LabeledExample>(decoded);
    if (options.dedup_training || options.dedup_exact) {
      std::string key = example_key(ex);
      if (options.dedup_training && training_keys.count(key) != 0) {
        ++report.rejected_counts[kDuplicateOfTraining];
        continue;
      }
      if (options.dedup_exact && !seen.insert(std::move(key)).second) {
        ++report.rejected_counts[kExactDuplicate];
        continue;
      }
    }
    report.accepted.push_back(std::move(ex));
    report.accepted_lines.push_back(i);
  }
  return report;
}

FilterReport merge_reports(const FilterReport& a, const FilterReport& b) {
  FilterReport out = a;
  out.total = a.total + b.total;
  out.accepted.insert(out.accepted.end(), b.accepted.begin(), b.accepted.end());
  for (const auto line : b.accepted_lines) out.accepted_lines.push_back(line + a.total);
  for (const auto& [reason, count] : b.rejected_counts) out.rejected_counts[reason] += count;
  return out;
}

std::vector<std::string> read_generation_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("file_not_found", "cannot open generations '" + path.string() + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

}  // namespace auglang::genfilter
