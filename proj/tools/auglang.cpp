// auglang: command-line front end for the augmentation pipeline stages.
//
// Every subcommand prints a one-line JSON summary on stdout. Failures exit
// nonzero with {"error": {"code": ..., "message": ...}} on stderr.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "json_config.hpp"

#include "auglang/error.hpp"
#include "auglang/mixoutlab/verify.hpp"
#include "auglang/pipeline/stages.hpp"

namespace {

namespace fs = std::filesystem;
namespace ap = auglang::pipeline;
namespace am = auglang::mixoutlab;
using auglang::Error;

int fail(const std::string& code, const std::string& message, int status = 1) {
  nlohmann::ordered_json j;
  j["error"] = {{"code", code}, {"message", message}};
  std::cerr << j.dump() << std::endl;
  return status;
}

void emit(const nlohmann::ordered_json& j) { std::cout << j.dump() << std::endl; }

// Picks the JSON reader for *.json config files; CLI11's TOML reader otherwise.
void choose_config_format(CLI::App& app, int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    std::string path;
    if (arg == "--config" && i + 1 < argc) {
      path = argv[i + 1];
    } else if (arg.rfind("--config=", 0) == 0) {
      path = arg.substr(9);
    }
    if (!path.empty() && fs::path(path).extension() == ".json") {
      app.config_formatter(std::make_shared<auglang::cli::JsonConfig>());
    }
  }
}

template <typename T>
void optional_path(CLI::App* sub, const std::string& name, std::optional<T>& target,
                   const std::string& help) {
  sub->add_option_function<std::string>(name, [&target](const std::string& v) { target = T(v); }, help);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (const char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"BIO slot/intent augmentation toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML or JSON config; sections are named after subcommands");
  choose_config_format(app, argc, argv);

  // subsample
  ap::SubsampleStage subsample;
  auto* sub_cmd = app.add_subcommand("subsample", "Per-intent ratio subsampling of a corpus");
  sub_cmd->add_option("--input", subsample.input, "CoNLL or JSONL corpus")->required();
  sub_cmd->add_option("--output", subsample.output, "Output corpus (format from extension)")->required();
  optional_path(sub_cmd, "--schema-out", subsample.schema_out, "Write the full corpus schema (JSON)");
  sub_cmd->add_option("--ratio", subsample.ratio, "Sampling ratio in (0, 1]")->required();
  sub_cmd->add_option("--seed", subsample.seed, "Sampling seed");
  sub_cmd->add_flag("--repair", subsample.repair, "Promote stray I- tags to B- on read");

  // prompts
  ap::PromptsStage prompts;
  std::string mode = "intent";
  auto* prompts_cmd = app.add_subcommand("prompts", "Emit conditioning prompts as JSONL");
  prompts_cmd->add_option("--corpus", prompts.corpus, "Source corpus")->required();
  optional_path(prompts_cmd, "--schema", prompts.schema, "Schema JSON (default: inferred)");
  prompts_cmd->add_option("--output", prompts.output, "Prompt JSONL")->required();
  prompts_cmd->add_option("--mode", mode, "intent | words | span | multi_spans")
      ->check(CLI::IsMember({"intent", "words", "span", "multi_spans"}));
  prompts_cmd->add_option("--count-per-intent", prompts.count_per_intent, "Prompts per intent");
  prompts_cmd->add_option("--seed", prompts.seed, "Prompt seed");
  prompts_cmd->add_option("--word-mask-rate", prompts.policy.word_mask_rate);
  prompts_cmd->add_option("--span-len-min", prompts.policy.span_len_min);
  prompts_cmd->add_option("--span-len-max", prompts.policy.span_len_max);
  prompts_cmd->add_option("--num-spans-min", prompts.policy.num_spans_min);
  prompts_cmd->add_option("--num-spans-max", prompts.policy.num_spans_max);
  prompts_cmd->add_option("--sentinel", prompts.policy.sentinel);

  // generate
  ap::GenerateStage generate;
  ap::EndpointOptions endpoint;
  std::string endpoint_url;
  auto* gen_cmd = app.add_subcommand("generate", "Obtain one generation per prompt");
  gen_cmd->add_option("--prompts", generate.prompts, "Prompt JSONL")->required();
  gen_cmd->add_option("--output", generate.output, "Generations, one per line")->required();
  optional_path(gen_cmd, "--from-file", generate.from_file, "Pre-computed generations file");
  gen_cmd->add_option("--endpoint", endpoint_url, "HTTP generator endpoint URL");
  gen_cmd->add_option("--timeout-ms", endpoint.timeout_ms);
  gen_cmd->add_option("--max-retries", endpoint.max_retries);
  gen_cmd->add_option("--backoff-ms", endpoint.backoff_ms);
  gen_cmd->add_option("--batch-size", endpoint.batch_size);
  gen_cmd->add_option("--parallelism", endpoint.parallelism);

  // filter
  ap::FilterStage filter;
  auto* filter_cmd = app.add_subcommand("filter", "Decode generations and drop invalid ones");
  filter_cmd->add_option("--generations", filter.generations)->required();
  filter_cmd->add_option("--schema", filter.schema, "Schema JSON")->required();
  filter_cmd->add_option("--output", filter.output, "Accepted examples")->required();
  optional_path(filter_cmd, "--summary", filter.summary, "Summary JSON path");
  optional_path(filter_cmd, "--training", filter.training, "Training corpus for dedup");
  filter_cmd->add_flag("--dedup-training", filter.dedup_training);
  filter_cmd->add_flag("--dedup-exact", filter.dedup_exact);

  // assemble
  ap::AssembleStage assemble;
  auto* asm_cmd = app.add_subcommand("assemble", "Concatenate real and synthetic examples");
  asm_cmd->add_option("--real", assemble.real)->required();
  asm_cmd->add_option("--synthetic", assemble.synthetic)->required();
  asm_cmd->add_option("--schema", assemble.schema)->required();
  asm_cmd->add_option("--output", assemble.output)->required();

  // metrics
  ap::MetricsStage metrics_stage;
  std::vector<std::string> embedding_specs;
  std::string averaging = "corpus";
  auto* met_cmd = app.add_subcommand("metrics", "Generation-quality metric report");
  optional_path(met_cmd, "--real-corpus", metrics_stage.real_corpus, "Real corpus");
  optional_path(met_cmd, "--generated-corpus", metrics_stage.generated_corpus, "Generated corpus");
  met_cmd->add_option("--embeddings", embedding_specs,
                      "NAME:REAL.emb1:GENERATED.emb1 (repeatable; e.g. plain, augmented, ft)");
  optional_path(met_cmd, "--real-logprobs", metrics_stage.real_logprobs, "Real logprob JSONL");
  optional_path(met_cmd, "--generated-logprobs", metrics_stage.generated_logprobs,
                "Generated logprob JSONL");
  met_cmd->add_option("--bleu-averaging", averaging)->check(CLI::IsMember({"corpus", "sentence"}));
  met_cmd->add_option("--bleu-epsilon", metrics_stage.bleu.epsilon);
  met_cmd->add_option("--prd-clusters", metrics_stage.prd.num_clusters);
  met_cmd->add_option("--prd-angles", metrics_stage.prd.num_angles);
  met_cmd->add_option("--prd-runs", metrics_stage.prd.num_runs);
  met_cmd->add_option("--prd-seed", metrics_stage.prd.seed);
  met_cmd->add_option("--output", metrics_stage.output, "Metric report JSON")->required();

  // mixout-verify
  am::VerifyOptions verify;
  std::string test_time = "raw";
  std::optional<fs::path> verify_out;
  auto* mix_cmd = app.add_subcommand("mixout-verify", "Numerical checks of the mixout theory");
  mix_cmd->add_option("--p-replace", verify.mixout.p_replace);
  mix_cmd->add_option("--m", verify.mixout.m, "Strong-convexity constant");
  mix_cmd->add_option("--seed", verify.seed);
  mix_cmd->add_option("--width", verify.width);
  mix_cmd->add_option("--in-dim", verify.in_dim);
  mix_cmd->add_option("--n-train", verify.n_train);
  mix_cmd->add_option("--n-test", verify.n_test);
  mix_cmd->add_option("--sgd-steps", verify.sgd_steps);
  mix_cmd->add_option("--mc-samples", verify.mc_samples);
  mix_cmd->add_option("--noise-rate", verify.noise_rate);
  mix_cmd->add_option("--test-time", test_time, "raw | mask_ones")
      ->check(CLI::IsMember({"raw", "mask_ones"}));
  optional_path(mix_cmd, "--output", verify_out, "Write the verification JSON here as well");

  // report
  ap::ReportStage report;
  std::vector<std::string> run_specs;
  auto* rep_cmd = app.add_subcommand("report", "Mean and std of filter and metric outputs over runs");
  rep_cmd->add_option("--run", run_specs, "FILTER_SUMMARY.json,METRICS.json (repeatable)")->required();
  rep_cmd->add_option("--output", report.output)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), 2);
  }

  try {
    if (sub_cmd->parsed()) {
      const auto r = ap::run_subsample(subsample);
      emit({{"stage", "subsample"}, {"input", r.input_count}, {"output", r.output_count}});
    } else if (prompts_cmd->parsed()) {
      prompts.mode = auglang::conditioning::parse_conditioning_mode(mode);
      emit({{"stage", "prompts"}, {"prompts", ap::run_prompts(prompts)}});
    } else if (gen_cmd->parsed()) {
      if (!endpoint_url.empty()) {
        endpoint.url = endpoint_url;
        generate.endpoint = endpoint;
      }
      emit({{"stage", "generate"}, {"generations", ap::run_generate(generate)}});
    } else if (filter_cmd->parsed()) {
      const auto r = ap::run_filter(filter);
      nlohmann::ordered_json j{{"stage", "filter"}};
      j.update(r.summary_json());
      emit(j);
    } else if (asm_cmd->parsed()) {
      emit({{"stage", "assemble"}, {"examples", ap::run_assemble(assemble)}});
    } else if (met_cmd->parsed()) {
      for (const auto& spec : embedding_specs) {
        const auto parts = split(spec, ':');
        if (parts.size() != 3 || parts[0].empty()) {
          throw Error("invalid_argument", "--embeddings expects NAME:REAL:GENERATED, got '" + spec + "'");
        }
        metrics_stage.embeddings.push_back({parts[0], parts[1], parts[2]});
      }
      metrics_stage.bleu.averaging = averaging == "sentence" ? auglang::metrics::BleuAveraging::kSentence
                                                             : auglang::metrics::BleuAveraging::kCorpus;
      const auto r = ap::run_metrics(metrics_stage);
      emit({{"stage", "metrics"}, {"metrics", r.entries.size()}, {"output", metrics_stage.output.string()}});
    } else if (mix_cmd->parsed()) {
      verify.test_time = test_time == "raw" ? am::TestTimeParams::kRaw : am::TestTimeParams::kMaskOnes;
      const auto r = am::run_verification(verify);
      if (verify_out) ap::write_json_file(*verify_out, r.to_json());
      emit(r.to_json());
      if (!r.all_passed()) {
        std::string failed;
        for (const auto& c : r.checks) {
          if (!c.passed) failed += (failed.empty() ? "" : ", ") + c.name;
        }
        return fail("verification_failed", "failed checks: " + failed);
      }
    } else if (rep_cmd->parsed()) {
      for (const auto& spec : run_specs) {
        const auto parts = split(spec, ',');
        if (parts.size() != 2) {
          throw Error("invalid_argument", "--run expects FILTER_SUMMARY,METRICS, got '" + spec + "'");
        }
        report.runs.emplace_back(parts[0], parts[1]);
      }
      const auto r = ap::run_report(report);
      emit({{"stage", "report"}, {"runs", r["runs"]}, {"output", report.output.string()}});
    }
  } catch (const Error& e) {
    return fail(e.code(), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail("json_error", e.what());
  } catch (const std::exception& e) {
    return fail("internal_error", e.what());
  }
  return EXIT_SUCCESS;
}
