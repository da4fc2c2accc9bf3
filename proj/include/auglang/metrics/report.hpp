#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "auglang/metrics/bleu.hpp"
#include "auglang/metrics/prd.hpp"

namespace auglang::metrics {

enum class Direction { kHigher, kLower };

const char* to_string(Direction d);
Direction parse_direction(const std::string& s);

struct MetricValue {
  double value = 0;
  Direction direction = Direction::kHigher;
  bool operator==(const MetricValue&) const = default;
};

/// Metric name -> value and which direction is better.
/// JSON form: {"<name>": {"value": x, "direction": "higher" | "lower"}, ...}.
struct MetricReport {
  std::map<std::string, MetricValue> entries;

  nlohmann::ordered_json to_json() const;
  static MetricReport from_json(const nlohmann::json& j);
  bool operator==(const MetricReport&) const = default;
};

/// A real/generated embedding pair. The name (for example "plain",
/// "augmented" or "ft") only says which encoder input produced the files and
/// becomes the suffix of the fd.* and prd_*.* entries.
struct EmbeddingPair {
  std::string name;
  std::filesystem::path real;
  std::filesystem::path generated;
};

struct MetricInputs {
  std::vector<TokenSeq> real_sentences;       // empty: BLEU entries skipped
  std::vector<TokenSeq> generated_sentences;
  std::vector<EmbeddingPair> embeddings;
  std::optional<std::filesystem::path> real_logprobs;
  std::optional<std::filesystem::path> generated_logprobs;
  BleuOptions bleu;
  PrdOptions prd;
};

/// Computes every metric the inputs allow. Component errors propagate.
MetricReport metric_report(const MetricInputs& inputs);

}  // namespace auglang::metrics
