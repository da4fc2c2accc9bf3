#include "auglang/conditioning/prompts.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <random>

#include "json.hpp"

#include "auglang/error.hpp"

namespace auglang::conditioning {
namespace {

using codec::SurfaceRole;
using codec::SurfaceToken;

struct Run {
  std::size_t begin;  // in maskable-position space
  std::size_t end;
  std::size_t size() const { return end - begin; }
};

std::size_t capacity(std::size_t len) { return (len + 1) / 2; }

struct Prepared {
  std::vector<SurfaceToken> surface;
  std::vector<std::size_t> maskable;  // surface indices of utterance tokens
  std::vector<Run> runs;
};

Prepared prepare(const codec::AugmentedSentence& aug, const codec::SlotSchema& schema,
                 const MaskPolicy& policy) {
  policy.validate();
  Prepared p;
  p.surface = codec::surface_tokens(aug, schema);
  int current_segment = -1;
  for (std::size_t i = 0; i < p.surface.size(); ++i) {
    const auto& tok = p.surface[i];
    if (tok.role != SurfaceRole::kUtterance) continue;
    if (tok.text == policy.sentinel) {
      throw Error("sentinel_collision",
                  "utterance token equals the sentinel '" + policy.sentinel + "'");
    }
    const std::size_t pos = p.maskable.size();
    p.maskable.push_back(i);
    if (tok.segment != current_segment) {
      p.runs.push_back({pos, pos + 1});
      current_segment = tok.segment;
    } else {
      p.runs.back().end = pos + 1;
    }
  }
  if (p.maskable.empty()) {
    throw Error("no_maskable_positions", "augmented sentence has no utterance tokens");
  }
  return p;
}

// Replaces the maskable positions flagged in `starts` by a sentinel and
// drops those flagged in `covered` (continuations of a span).
std::string render(const Prepared& p, const std::vector<char>& starts,
                   const std::vector<char>& covered, const std::string& sentinel) {
  std::vector<char> start_at(p.surface.size(), 0);
  std::vector<char> drop_at(p.surface.size(), 0);
  for (std::size_t m = 0; m < p.maskable.size(); ++m) {
    if (starts[m]) start_at[p.maskable[m]] = 1;
    else if (covered[m]) drop_at[p.maskable[m]] = 1;
  }
  std::string out;
  for (std::size_t i = 0; i < p.surface.size(); ++i) {
    if (drop_at[i]) continue;
    if (!out.empty()) out.push_back(' ');
    out += start_at[i] ? sentinel : p.surface[i].text;
  }
  return out;
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// Places up to `k` non-overlapping, non-adjacent spans inside `runs`.
// Each span draws its length uniformly in [len_min, len_max], shrinking it
// only as far as needed to leave room for the spans still to come, and
// starts uniformly among the positions where it fits.
std::vector<Run> place_spans(std::vector<Run> runs, std::size_t k, const MaskPolicy& policy,
                             std::mt19937_64& rng) {
  std::size_t total_capacity = 0;
  for (const auto& r : runs) total_capacity += capacity(r.size());
  k = std::min(k, total_capacity);

  struct Candidate {
    std::size_t run;
    std::size_t start;
  };
  std::vector<Run> spans;
  std::vector<Candidate> candidates;
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t still_needed = k - j - 1;
    const int drawn = uniform_int(rng, policy.span_len_min, policy.span_len_max);
    std::size_t len = static_cast<std::size_t>(drawn);
    for (; len >= 1; --len) {
      candidates.clear();
      for (std::size_t r = 0; r < runs.size(); ++r) {
        const Run run = runs[r];
        if (run.size() < len) continue;
        for (std::size_t s = run.begin; s + len <= run.end; ++s) {
          const std::size_t left = s > run.begin + 1 ? s - 1 - run.begin : 0;
          const std::size_t right = run.end > s + len + 1 ? run.end - (s + len + 1) : 0;
          const std::size_t after =
              total_capacity - capacity(run.size()) + capacity(left) + capacity(right);
          if (after >= still_needed) candidates.push_back({r, s});
        }
      }
      if (!candidates.empty()) break;
    }
    // len >= 1 always succeeds: starting at a run's first position costs
    // exactly one unit of capacity.
    if (candidates.empty()) throw Error("internal_error", "no feasible span placement");
    const auto pick = std::uniform_int_distribution<std::size_t>(0, candidates.size() - 1)(rng);
    const Candidate c = candidates[pick];
    const Run run = runs[c.run];
    spans.push_back({c.start, c.start + len});
    total_capacity -= capacity(run.size());
    runs.erase(runs.begin() + static_cast<std::ptrdiff_t>(c.run));
    if (c.start > run.begin + 1) {
      runs.push_back({run.begin, c.start - 1});
      total_capacity += capacity(c.start - 1 - run.begin);
    }
    if (run.end > c.start + len + 1) {
      runs.push_back({c.start + len + 1, run.end});
      total_capacity += capacity(run.end - (c.start + len + 1));
    }
    std::sort(runs.begin(), runs.end(), [](const Run& a, const Run& b) { return a.begin < b.begin; });
  }
  std::sort(spans.begin(), spans.end(), [](const Run& a, const Run& b) { return a.begin < b.begin; });
  return spans;
}

ConditioningInput masked_spans_prompt(const codec::AugmentedSentence& aug,
                                      const codec::SlotSchema& schema, const MaskPolicy& policy,
                                      std::uint64_t seed, ConditioningMode mode, bool multi) {
  const Prepared p = prepare(aug, schema, policy);
  std::mt19937_64 rng(seed);
  std::size_t k = 1;
  if (multi) k = static_cast<std::size_t>(uniform_int(rng, policy.num_spans_min, policy.num_spans_max));
  const auto spans = place_spans(p.runs, k, policy, rng);
  std::vector<char> starts(p.maskable.size(), 0);
  std::vector<char> covered(p.maskable.size(), 0);
  for (const auto& span : spans) {
    starts[span.begin] = 1;
    for (std::size_t m = span.begin; m < span.end; ++m) covered[m] = 1;
  }
  return {mode, render(p, starts, covered, policy.sentinel), std::nullopt, seed};
}

bool has_space(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
  });
}

}  // namespace

std::string_view to_string(ConditioningMode mode) {
  switch (mode) {
    case ConditioningMode::kIntent: return "intent";
    case ConditioningMode::kWords: return "words";
    case ConditioningMode::kSpan: return "span";
    case ConditioningMode::kMultiSpans: return "multi_spans";
  }
  return "intent";
}

ConditioningMode parse_conditioning_mode(std::string_view name) {
  if (name == "intent") return ConditioningMode::kIntent;
  if (name == "words") return ConditioningMode::kWords;
  if (name == "span") return ConditioningMode::kSpan;
  if (name == "multi_spans") return ConditioningMode::kMultiSpans;
  throw Error("invalid_argument", "unknown conditioning mode '" + std::string(name) + "'");
}

void MaskPolicy::validate() const {
  auto fail = [](const std::string& msg) { throw Error("invalid_mask_policy", msg); };
  if (!(word_mask_rate > 0.0 && word_mask_rate <= 1.0)) {
    fail("word_mask_rate must lie in (0, 1]");
  }
  if (span_len_min < 1 || span_len_max < span_len_min) {
    fail("span lengths need 1 <= span_len_min <= span_len_max");
  }
  if (num_spans_min < 1 || num_spans_max < num_spans_min) {
    fail("span counts need 1 <= num_spans_min <= num_spans_max");
  }
  if (sentinel.empty() || has_space(sentinel)) fail("sentinel must be a non-empty token");
  for (const char c : sentinel) {
    if (c == '[' || c == ']' || c == ':' || c == ';' || c == '\\') {
      fail("sentinel must not contain reserved characters");
    }
  }
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  auto splitmix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return splitmix(seed ^ splitmix(index));
}

ConditioningInput intent_condition(std::string_view intent, const codec::SlotSchema& schema) {
  if (intent.empty()) throw Error("invalid_label", "intent is empty");
  if (!schema.intent_from_normalized(intent)) {
    throw Error("unknown_intent", "intent '" + std::string(intent) + "' is not in the schema");
  }
  return {ConditioningMode::kIntent, "intent : " + std::string(intent) + " ;", std::nullopt, 0};
}

std::vector<ConditioningInput> sample_intent_conditions(const codec::SlotSchema& schema,
                                                        std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, schema.intents().size() - 1);
  std::vector<ConditioningInput> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    auto prompt = intent_condition(schema.normalized_intent(schema.intents()[pick(rng)]), schema);
    prompt.seed = seed;
    out.push_back(std::move(prompt));
  }
  return out;
}

ConditioningInput mask_words(const codec::AugmentedSentence& aug, const codec::SlotSchema& schema,
                             const MaskPolicy& policy, std::uint64_t seed) {
  const Prepared p = prepare(aug, schema, policy);
  const std::size_t n = p.maskable.size();
  std::vector<char> masked(n, 0);
  const double rate = policy.word_mask_rate;
  if (rate >= 1.0) {
    std::fill(masked.begin(), masked.end(), 1);
  } else {
    // Draws from the independent-Bernoulli law conditioned on at least one
    // mask: the first masked position i has weight (1-rate)^i * rate, and
    // later positions stay independent.
    std::mt19937_64 rng(seed);
    std::vector<double> first_weights(n);
    for (std::size_t i = 0; i < n; ++i) {
      first_weights[i] = std::pow(1.0 - rate, static_cast<double>(i)) * rate;
    }
    const std::size_t first =
        std::discrete_distribution<std::size_t>(first_weights.begin(), first_weights.end())(rng);
    masked[first] = 1;
    std::bernoulli_distribution coin(rate);
    for (std::size_t i = first + 1; i < n; ++i) masked[i] = coin(rng) ? 1 : 0;
  }
  return {ConditioningMode::kWords, render(p, masked, masked, policy.sentinel), std::nullopt, seed};
}

ConditioningInput mask_span(const codec::AugmentedSentence& aug, const codec::SlotSchema& schema,
                            const MaskPolicy& policy, std::uint64_t seed) {
  return masked_spans_prompt(aug, schema, policy, seed, ConditioningMode::kSpan, false);
}

ConditioningInput mask_multi_spans(const codec::AugmentedSentence& aug,
                                   const codec::SlotSchema& schema, const MaskPolicy& policy,
                                   std::uint64_t seed) {
  return masked_spans_prompt(aug, schema, policy, seed, ConditioningMode::kMultiSpans, true);
}

std::vector<ConditioningInput> build_requests(const std::vector<codec::LabeledExample>& corpus,
                                              const codec::SlotSchema& schema,
                                              ConditioningMode mode, std::size_t count_per_intent,
                                              const MaskPolicy& policy, std::uint64_t seed) {
  std::vector<ConditioningInput> out;
  if (count_per_intent == 0) return out;
  out.reserve(count_per_intent * schema.intents().size());

  if (mode == ConditioningMode::kIntent) {
    for (const auto& intent : schema.intents()) {
      for (std::size_t c = 0; c < count_per_intent; ++c) {
        auto prompt = intent_condition(schema.normalized_intent(intent), schema);
        prompt.seed = seed;
        out.push_back(std::move(prompt));
      }
    }
    return out;
  }

  policy.validate();
  std::map<std::string, std::vector<std::size_t>, std::less<>> by_intent;
  for (std::size_t i = 0; i < corpus.size(); ++i) by_intent[corpus[i].intent].push_back(i);
  std::vector<codec::AugmentedSentence> encoded(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) encoded[i] = codec::encode(corpus[i], schema);

  std::mt19937_64 rng(seed);
  std::uint64_t prompt_index = 0;
  for (const auto& intent : schema.intents()) {
    auto it = by_intent.find(intent);
    if (it == by_intent.end() || it->second.empty()) {
      throw Error("empty_intent", "intent '" + intent + "' has no examples to mask");
    }
    const auto& members = it->second;
    std::uniform_int_distribution<std::size_t> pick(0, members.size() - 1);
    for (std::size_t c = 0; c < count_per_intent; ++c) {
      const std::size_t source = members[pick(rng)];
      const std::uint64_t prompt_seed = derive_seed(seed, prompt_index++);
      ConditioningInput prompt;
      switch (mode) {
        case ConditioningMode::kWords:
          prompt = mask_words(encoded[source], schema, policy, prompt_seed);
          break;
        case ConditioningMode::kSpan:
          prompt = mask_span(encoded[source], schema, policy, prompt_seed);
          break;
        default:
          prompt = mask_multi_spans(encoded[source], schema, policy, prompt_seed);
          break;
      }
      prompt.source_index = source;
      out.push_back(std::move(prompt));
    }
  }
  return out;
}

void write_prompts(std::ostream& out, const std::vector<ConditioningInput>& prompts) {
  for (const auto& p : prompts) {
    nlohmann::ordered_json obj;
    obj["mode"] = std::string(to_string(p.mode));
    obj["text"] = p.text;
    if (p.source_index) obj["source_index"] = *p.source_index;
    else obj["source_index"] = nullptr;
    obj["seed"] = p.seed;
    out << obj.dump() << '\n';
  }
}

std::vector<ConditioningInput> read_prompts(std::istream& in) {
  std::vector<ConditioningInput> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto obj = nlohmann::json::parse(line);
      ConditioningInput p;
      p.mode = parse_conditioning_mode(obj.at("mode").get<std::string>());
      p.text = obj.at("text").get<std::string>();
      if (obj.contains("source_index") && !obj["source_index"].is_null()) {
        p.source_index = obj["source_index"].get<std::size_t>();
      }
      p.seed = obj.value("seed", std::uint64_t{0});
      out.push_back(std::move(p));
    } catch (const nlohmann::json::exception& e) {
      throw Error("prompt_format", "prompt line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void write_prompts_file(const std::filesystem::path& path,
                        const std::vector<ConditioningInput>& prompts) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("io_error", "cannot write '" + path.string() + "'");
  write_prompts(out, prompts);
}

std::vector<ConditioningInput> read_prompts_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("file_not_found", "cannot open prompts '" + path.string() + "'");
  return read_prompts(in);
}

}  // namespace auglang::conditioning
