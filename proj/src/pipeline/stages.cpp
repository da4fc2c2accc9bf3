#include "auglang/pipeline/stages.hpp"

#include <fstream>

#include "auglang/codec/corpus_io.hpp"
#include "auglang/error.hpp"
#include "auglang/pipeline/assemble.hpp"
#include "auglang/pipeline/report.hpp"
#include "auglang/pipeline/subsample.hpp"

namespace auglang::pipeline {
namespace {

std::vector<codec::LabeledExample> read_examples(const fs::path& path, bool repair = false) {
  return codec::examples_of(codec::read_corpus_file(path, std::nullopt, {repair}));
}

void write_examples(const fs::path& path, const std::vector<codec::CorpusEntry>& entries) {
  codec::write_corpus_file(path, entries, codec::guess_corpus_format(path));
}

std::vector<metrics::TokenSeq> sentences_of(const fs::path& corpus) {
  std::vector<metrics::TokenSeq> out;
  for (auto& ex : read_examples(corpus)) out.push_back(std::move(ex.tokens));
  return out;
}

}  // namespace

void write_json_file(const fs::path& path, const nlohmann::ordered_json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("io_error", "cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
  if (!out) throw Error("io_error", "failed writing '" + path.string() + "'");
}

SubsampleResult run_subsample(const SubsampleStage& stage) {
  const auto corpus = read_examples(stage.input, stage.repair);
  const auto sub = subsample_per_intent(corpus, stage.ratio, stage.seed);
  write_examples(stage.output, codec::entries_of(sub));
  if (stage.schema_out) codec::write_schema_file(*stage.schema_out, codec::infer_schema(corpus));
  return {corpus.size(), sub.size()};
}

std::size_t run_prompts(const PromptsStage& stage) {
  stage.policy.validate();
  const auto corpus = read_examples(stage.corpus);
  const auto schema = stage.schema ? codec::read_schema_file(*stage.schema) : codec::infer_schema(corpus);
  const auto prompts = conditioning::build_requests(corpus, schema, stage.mode,
                                                    stage.count_per_intent, stage.policy, stage.seed);
  conditioning::write_prompts_file(stage.output, prompts);
  return prompts.size();
}

std::size_t run_generate(const GenerateStage& stage) {
  if (stage.from_file.has_value() == stage.endpoint.has_value()) {
    throw Error("invalid_config", "generate needs exactly one of a generations file or an endpoint");
  }
  const auto prompts = conditioning::read_prompts_file(stage.prompts);
  std::vector<std::string> generations;
  if (stage.from_file) {
    generations = generations_from_file(*stage.from_file, prompts.size());
  } else {
    std::vector<std::string> texts;
    texts.reserve(prompts.size());
    for (const auto& p : prompts) texts.push_back(p.text);
    generations = generations_from_endpoint(texts, *stage.endpoint);
  }
  write_generations_file(stage.output, generations);
  return generations.size();
}

genfilter::FilterReport run_filter(const FilterStage& stage) {
  if (stage.dedup_training && !stage.training) {
    throw Error("invalid_config", "dedup against training data needs a training corpus");
  }
  const auto schema = codec::read_schema_file(stage.schema);
  const auto lines = genfilter::read_generation_lines(stage.generations);
  std::vector<codec::LabeledExample> training;
  if (stage.training) training = read_examples(*stage.training);
  genfilter::FilterOptions opts;
  opts.dedup_training = stage.dedup_training;
  opts.dedup_exact = stage.dedup_exact;
  opts.training = training;
  auto report = genfilter::filter_generations(lines, schema, opts);
  write_examples(stage.output, codec::entries_of(report.accepted, codec::Provenance::kSynthetic));
  if (stage.summary) write_json_file(*stage.summary, report.summary_json());
  return report;
}

std::size_t run_assemble(const AssembleStage& stage) {
  const auto schema = codec::read_schema_file(stage.schema);
  const auto out = assemble_augmented_set(read_examples(stage.real), schema,
                                          read_examples(stage.synthetic), schema);
  write_examples(stage.output, out);
  return out.size();
}

metrics::MetricReport run_metrics(const MetricsStage& stage) {
  metrics::MetricInputs in;
  if (stage.real_corpus) in.real_sentences = sentences_of(*stage.real_corpus);
  if (stage.generated_corpus) in.generated_sentences = sentences_of(*stage.generated_corpus);
  in.embeddings = stage.embeddings;
  in.real_logprobs = stage.real_logprobs;
  in.generated_logprobs = stage.generated_logprobs;
  in.bleu = stage.bleu;
  in.prd = stage.prd;
  auto report = metrics::metric_report(in);
  write_json_file(stage.output, report.to_json());
  return report;
}

nlohmann::ordered_json run_report(const ReportStage& stage) {
  std::vector<RunRecord> runs;
  for (const auto& [filter, metric] : stage.runs) runs.push_back(load_run(filter, metric));
  auto out = aggregate_runs(runs);
  write_json_file(stage.output, out);
  return out;
}

}  // namespace auglang::pipeline
