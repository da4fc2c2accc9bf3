#pragma once

// One seeded file-mode pipeline run over the checked-in toy fixtures. Used by
// the determinism test and the acceptance suite.

#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include "auglang/pipeline/stages.hpp"

namespace auglang::testing {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(AUGLANG_FIXTURE_DIR) / name;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct PipelineOutputs {
  std::filesystem::path prompts, filtered, report;
};

/// subsample -> prompts -> generate (file) -> filter -> assemble -> metrics -> report.
inline PipelineOutputs run_toy_pipeline(const std::filesystem::path& dir, std::uint64_t seed) {
  namespace p = auglang::pipeline;
  std::filesystem::create_directories(dir);
  p::run_subsample({fixture("toy_train.conll"), dir / "sub.conll", dir / "schema.json", 0.25, seed});

  p::PromptsStage prompts;
  prompts.corpus = dir / "sub.conll";
  prompts.schema = dir / "schema.json";
  prompts.output = dir / "prompts.jsonl";
  prompts.count_per_intent = 5;
  prompts.seed = seed;
  p::run_prompts(prompts);

  p::GenerateStage gen;
  gen.prompts = dir / "prompts.jsonl";
  gen.output = dir / "generations.txt";
  gen.from_file = fixture("toy_generations.txt");
  p::run_generate(gen);

  p::FilterStage filter;
  filter.generations = dir / "generations.txt";
  filter.schema = dir / "schema.json";
  filter.output = dir / "filtered.conll";
  filter.summary = dir / "filter_summary.json";
  filter.training = dir / "sub.conll";
  filter.dedup_exact = true;
  p::run_filter(filter);

  p::run_assemble({dir / "sub.conll", dir / "filtered.conll", dir / "schema.json",
                   dir / "augmented.conll"});

  p::MetricsStage metrics;
  metrics.real_corpus = dir / "sub.conll";
  metrics.generated_corpus = dir / "filtered.conll";
  metrics.embeddings = {{"plain", fixture("real_plain.emb1"), fixture("fake_plain.emb1")}};
  metrics.generated_logprobs = fixture("fake_logprobs.jsonl");
  metrics.prd.num_runs = 3;
  metrics.prd.seed = seed;
  metrics.output = dir / "metrics.json";
  p::run_metrics(metrics);

  p::run_report({{{dir / "filter_summary.json", dir / "metrics.json"}}, dir / "report.json"});
  return {dir / "prompts.jsonl", dir / "filtered.conll", dir / "report.json"};
}

}  // namespace auglang::testing
