#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "auglang/codec/schema.hpp"

namespace auglang::genfilter {

inline constexpr const char* kDuplicateOfTraining = "duplicate_of_training";
inline constexpr const char* kExactDuplicate = "exact_duplicate";

struct FilterOptions {
  // Drop generations identical (tokens, tags and intent) to a training example.
  bool dedup_training = false;
  // Drop generations identical to an earlier accepted generation.
  bool dedup_exact = false;
  std::span<const codec::LabeledExample> training;
};

/// Outcome of filtering one batch of generations. Invariant:
/// accepted.size() + sum(rejected_counts) == total.
struct FilterReport {
  std::vector<codec::LabeledExample> accepted;
  std::vector<std::size_t> accepted_lines;  // 0-based input line of each accepted example
  std::map<std::string, std::size_t> rejected_counts;
  std::size_t total = 0;

  std::size_t rejected() const;

  /// Summary JSON: {"total", "accepted", "rejected": {reason: count}}.
  nlohmann::ordered_json summary_json() const;
};

/// Decodes every line and keeps the valid ones, in input order. Never throws
/// on bad input; each failure is counted under the codec error code or a
/// deduplication reason.
FilterReport filter_generations(std::span<const std::string> lines,
                                const codec::SlotSchema& schema,
                                const FilterOptions& options = {});

/// Combines reports of consecutive chunks of one input. Line indices of `b`
/// are shifted by a.total. Deduplication across chunks is not re-applied.
FilterReport merge_reports(const FilterReport& a, const FilterReport& b);

/// One generation per line; a trailing newline does not produce an extra
/// empty generation. CR before LF is stripped.
std::vector<std::string> read_generation_lines(const std::filesystem::path& path);

}  // namespace auglang::genfilter
