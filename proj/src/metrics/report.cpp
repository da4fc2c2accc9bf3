#include "auglang/metrics/report.hpp"

#include <cmath>

#include "auglang/error.hpp"
#include "auglang/metrics/embeddings.hpp"
#include "auglang/metrics/frechet.hpp"
#include "auglang/metrics/perplexity.hpp"

namespace auglang::metrics {

const char* to_string(Direction d) { return d == Direction::kHigher ? "higher" : "lower"; }

Direction parse_direction(const std::string& s) {
  if (s == "higher") return Direction::kHigher;
  if (s == "lower") return Direction::kLower;
  throw Error("report_format", "unknown metric direction '" + s + "'");
}

nlohmann::ordered_json MetricReport::to_json() const {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (const auto& [name, v] : entries) {
    out[name] = {{"value", v.value}, {"direction", to_string(v.direction)}};
  }
  return out;
}

MetricReport MetricReport::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error("report_format", "metric report must be a JSON object");
  MetricReport r;
  for (const auto& [name, v] : j.items()) {
    if (!v.is_object() || !v.contains("value") || !v["value"].is_number() ||
        !v.contains("direction") || !v["direction"].is_string()) {
      throw Error("report_format", "metric '" + name + "' needs numeric value and direction");
    }
    r.entries[name] = {v["value"].get<double>(), parse_direction(v["direction"].get<std::string>())};
  }
  return r;
}

MetricReport metric_report(const MetricInputs& in) {
  MetricReport r;
  auto put = [&](const std::string& name, double value, Direction dir) {
    if (!std::isfinite(value)) throw Error("non_finite", "metric '" + name + "' is not finite");
    r.entries[name] = {value, dir};
  };
  if (!in.generated_sentences.empty() && !in.real_sentences.empty()) {
    put("bleu4", corpus_bleu4(in.generated_sentences, in.real_sentences, in.bleu),
        Direction::kHigher);
  }
  if (in.generated_sentences.size() >= 2) {
    put("self_bleu4.generated", self_bleu4(in.generated_sentences, in.bleu), Direction::kLower);
  }
  if (in.real_sentences.size() >= 2) {
    put("self_bleu4.real", self_bleu4(in.real_sentences, in.bleu), Direction::kLower);
  }
  if (in.real_logprobs) {
    put("perplexity.real", perplexity(read_logprob_file(*in.real_logprobs)), Direction::kLower);
  }
  if (in.generated_logprobs) {
    put("perplexity.generated", perplexity(read_logprob_file(*in.generated_logprobs)),
        Direction::kLower);
  }
  for (const auto& pair : in.embeddings) {
    if (pair.name.empty()) throw Error("invalid_argument", "embedding pair needs a name");
    const auto real = read_emb1_file(pair.real);
    const auto gen = read_emb1_file(pair.generated);
    put("fd." + pair.name, frechet_distance(real, gen), Direction::kLower);
    const auto curve = prd_curve(real, gen, in.prd);
    put("prd_precision." + pair.name, curve.precision_score, Direction::kHigher);
    put("prd_recall." + pair.name, curve.recall_score, Direction::kHigher);
  }
  return r;
}

}  // namespace auglang::metrics
