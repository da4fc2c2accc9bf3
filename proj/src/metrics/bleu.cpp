#include "auglang/metrics/bleu.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <map>
#include <unordered_map>

#include "auglang/error.hpp"

namespace auglang::metrics {
namespace {

constexpr int kMaxOrder = 4;

std::string ngram_key(const TokenSeq& s, std::size_t start, int n) {
  std::string key = std::to_string(n);
  for (int j = 0; j < n; ++j) {
    key.push_back('\x1f');
    key += s[start + j];
  }
  return key;
}

std::unordered_map<std::string, int> ngram_counts(const TokenSeq& s) {
  std::unordered_map<std::string, int> counts;
  for (int n = 1; n <= kMaxOrder; ++n) {
    for (std::size_t i = 0; i + n <= s.size(); ++i) ++counts[ngram_key(s, i, n)];
  }
  return counts;
}

// Per n-gram, the two largest counts over a reference pool and the owner of
// the largest, so leave-one-out maxima are O(1).
struct TopTwo {
  int first = 0;
  std::size_t owner = 0;
  int second = 0;
};

struct Stats {
  std::array<double, kMaxOrder> matches{};
  std::array<double, kMaxOrder> totals{};
  double cand_len = 0;
  double ref_len = 0;

  void add(const Stats& o) {
    for (int n = 0; n < kMaxOrder; ++n) {
      matches[n] += o.matches[n];
      totals[n] += o.totals[n];
    }
    cand_len += o.cand_len;
    ref_len += o.ref_len;
  }
};

double score(const Stats& st, double eps) {
  double log_sum = 0;
  for (int n = 0; n < kMaxOrder; ++n) {
    const double p = (st.matches[n] > 0 && st.totals[n] > 0) ? st.matches[n] / st.totals[n] : eps;
    log_sum += std::log(p);
  }
  double bp = 1.0;
  if (st.cand_len == 0) {
    bp = 0.0;
  } else if (st.cand_len < st.ref_len) {
    bp = std::exp(1.0 - st.ref_len / st.cand_len);
  }
  return bp * std::exp(log_sum / kMaxOrder);
}

// Closest length in a multiset of reference lengths; ties go to the shorter.
std::size_t closest_length(const std::map<std::size_t, int>& lengths, std::size_t len) {
  std::size_t best = 0;
  std::size_t best_gap = SIZE_MAX;
  auto it = lengths.lower_bound(len);
  if (it != lengths.end()) {
    best = it->first;
    best_gap = it->first - len;
  }
  if (it != lengths.begin()) {
    const auto prev = std::prev(it)->first;
    if (len - prev <= best_gap) best = prev;
  }
  return best;
}

template <typename MaxCount>
Stats sentence_stats(const TokenSeq& cand, const std::map<std::size_t, int>& ref_lengths,
                     MaxCount&& max_count) {
  Stats st;
  for (const auto& [key, count] : ngram_counts(cand)) {
    const int n = std::atoi(key.c_str()) - 1;
    st.matches[n] += std::min(count, max_count(key));
  }
  for (int n = 1; n <= kMaxOrder; ++n) {
    st.totals[n - 1] = cand.size() >= static_cast<std::size_t>(n) ? cand.size() - n + 1 : 0;
  }
  st.cand_len = static_cast<double>(cand.size());
  st.ref_len = static_cast<double>(closest_length(ref_lengths, cand.size()));
  return st;
}

}  // namespace

double corpus_bleu4(const std::vector<TokenSeq>& candidates,
                    const std::vector<TokenSeq>& references, const BleuOptions& options) {
  if (candidates.empty()) throw Error("empty_input", "BLEU needs at least one candidate");
  if (references.empty()) throw Error("empty_input", "BLEU needs at least one reference");
  std::unordered_map<std::string, int> max_counts;
  std::map<std::size_t, int> ref_lengths;
  for (const auto& ref : references) {
    ++ref_lengths[ref.size()];
    for (const auto& [key, count] : ngram_counts(ref)) {
      auto& m = max_counts[key];
      m = std::max(m, count);
    }
  }
  const auto lookup = [&](const std::string& key) {
    const auto it = max_counts.find(key);
    return it == max_counts.end() ? 0 : it->second;
  };
  if (options.averaging == BleuAveraging::kSentence) {
    double sum = 0;
    for (const auto& cand : candidates) {
      sum += score(sentence_stats(cand, ref_lengths, lookup), options.epsilon);
    }
    return sum / static_cast<double>(candidates.size());
  }
  Stats total;
  for (const auto& cand : candidates) total.add(sentence_stats(cand, ref_lengths, lookup));
  return score(total, options.epsilon);
}

double self_bleu4(const std::vector<TokenSeq>& corpus, const BleuOptions& options) {
  if (corpus.size() < 2) throw Error("empty_input", "Self-BLEU needs at least two sentences");
  std::unordered_map<std::string, TopTwo> tops;
  std::map<std::size_t, int> lengths;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    ++lengths[corpus[i].size()];
    for (const auto& [key, count] : ngram_counts(corpus[i])) {
      auto& t = tops[key];
      if (count > t.first) {
        t.second = t.first;
        t.first = count;
        t.owner = i;
      } else if (count > t.second) {
        t.second = count;
      }
    }
  }
  double sum = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    auto others = lengths;
    if (--others[corpus[i].size()] == 0) others.erase(corpus[i].size());
    const auto lookup = [&](const std::string& key) {
      const auto& t = tops.at(key);
      return t.owner == i ? t.second : t.first;
    };
    // A single candidate: corpus and sentence averaging coincide.
    sum += score(sentence_stats(corpus[i], others, lookup), options.epsilon);
  }
  return sum / static_cast<double>(corpus.size());
}

}  // namespace auglang::metrics
