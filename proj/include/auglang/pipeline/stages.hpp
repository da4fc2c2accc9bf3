#pragma once

// File-to-file pipeline stages shared by the command-line tool and the tests.
// Each stage reads only its inputs and rewrites only its outputs, so a stage
// can be re-run on its own; outputs are a pure function of inputs and seeds.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <utility>
#include <vector>

#include "auglang/conditioning/prompts.hpp"
#include "auglang/genfilter/filter.hpp"
#include "auglang/metrics/report.hpp"
#include "auglang/pipeline/generation.hpp"

namespace auglang::pipeline {

namespace fs = std::filesystem;

struct SubsampleStage {
  fs::path input;
  fs::path output;
  std::optional<fs::path> schema_out;  // schema of the full input corpus
  double ratio = 1.0;
  std::uint64_t seed = 0;
  bool repair = false;  // promote stray I- tags while reading
};

struct SubsampleResult {
  std::size_t input_count = 0;
  std::size_t output_count = 0;
};

SubsampleResult run_subsample(const SubsampleStage& stage);

struct PromptsStage {
  fs::path corpus;
  std::optional<fs::path> schema;  // inferred from the corpus when absent
  fs::path output;
  conditioning::ConditioningMode mode = conditioning::ConditioningMode::kIntent;
  std::size_t count_per_intent = 100;
  conditioning::MaskPolicy policy;
  std::uint64_t seed = 0;
};

/// Returns the number of prompts written.
std::size_t run_prompts(const PromptsStage& stage);

struct GenerateStage {
  fs::path prompts;
  fs::path output;
  // Exactly one source.
  std::optional<fs::path> from_file;
  std::optional<EndpointOptions> endpoint;
};

std::size_t run_generate(const GenerateStage& stage);

struct FilterStage {
  fs::path generations;
  fs::path schema;
  fs::path output;                   // accepted examples, CoNLL or JSONL by extension
  std::optional<fs::path> summary;   // FilterReport summary JSON
  std::optional<fs::path> training;  // for dedup_training
  bool dedup_training = false;
  bool dedup_exact = false;
};

genfilter::FilterReport run_filter(const FilterStage& stage);

struct AssembleStage {
  fs::path real;
  fs::path synthetic;
  fs::path schema;
  fs::path output;
};

std::size_t run_assemble(const AssembleStage& stage);

struct MetricsStage {
  std::optional<fs::path> real_corpus;
  std::optional<fs::path> generated_corpus;
  std::vector<metrics::EmbeddingPair> embeddings;
  std::optional<fs::path> real_logprobs;
  std::optional<fs::path> generated_logprobs;
  metrics::BleuOptions bleu;
  metrics::PrdOptions prd;
  fs::path output;
};

metrics::MetricReport run_metrics(const MetricsStage& stage);

struct ReportStage {
  // (filter summary, metric report) per run.
  std::vector<std::pair<fs::path, fs::path>> runs;
  fs::path output;
};

nlohmann::ordered_json run_report(const ReportStage& stage);

/// Pretty JSON with a trailing newline.
void write_json_file(const fs::path& path, const nlohmann::ordered_json& j);

}  // namespace auglang::pipeline
