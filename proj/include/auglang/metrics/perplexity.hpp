#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

namespace auglang::metrics {

/// Natural-log token probabilities of one sentence.
using LogprobRecord = std::vector<double>;

/// Corpus perplexity exp(-sum(logp) / token_count).
double perplexity(const std::vector<LogprobRecord>& records);

/// JSONL, one {"logprobs": [...]} object per sentence. Blank lines are skipped.
std::vector<LogprobRecord> read_logprob_jsonl(std::istream& in);
std::vector<LogprobRecord> read_logprob_file(const std::filesystem::path& path);
void write_logprob_jsonl(std::ostream& out, const std::vector<LogprobRecord>& records);

}  // namespace auglang::metrics
