#pragma once

#include <string>
#include <vector>

namespace auglang::metrics {

using TokenSeq = std::vector<std::string>;

enum class BleuAveraging { kCorpus, kSentence };

struct BleuOptions {
  // Replaces a zero n-gram precision (no matches, or no n-grams of that order).
  double epsilon = 1e-9;
  BleuAveraging averaging = BleuAveraging::kCorpus;
};

/// BLEU-4 of `candidates` where every candidate is scored against the whole
/// `references` pool. Clipping uses the per-reference maximum count; brevity
/// uses the closest reference length (shorter one on ties).
double corpus_bleu4(const std::vector<TokenSeq>& candidates,
                    const std::vector<TokenSeq>& references, const BleuOptions& options = {});

/// Mean over sentences of corpus_bleu4({s}, corpus without s).
double self_bleu4(const std::vector<TokenSeq>& corpus, const BleuOptions& options = {});

}  // namespace auglang::metrics
