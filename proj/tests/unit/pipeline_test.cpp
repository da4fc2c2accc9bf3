#include <chrono>
#include <cmath>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <gtest/gtest.h>

#include "auglang/codec/corpus_io.hpp"
#include "auglang/error.hpp"
#include "auglang/pipeline/assemble.hpp"
#include "auglang/pipeline/generation.hpp"
#include "auglang/pipeline/report.hpp"
#include "auglang/pipeline/subsample.hpp"
#include "../support/echo_server.hpp"
#include "../support/generators.hpp"
#include "../support/pipeline_run.hpp"

namespace auglang::pipeline {
namespace {

namespace fs = std::filesystem;
using codec::LabeledExample;

std::string expect_code(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return "no error";
}

std::vector<LabeledExample> corpus_with_counts(const std::vector<std::size_t>& counts) {
  std::vector<LabeledExample> out;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    for (std::size_t i = 0; i < counts[k]; ++i) {
      out.push_back({{"w" + std::to_string(i)}, {"O"}, "Intent" + std::to_string(k)});
    }
  }
  // Interleave intents so order preservation is meaningful.
  std::mt19937_64 rng(1);
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

fs::path temp_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("auglang_pipeline_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

TEST(Subsample, RatioOneIsIdentity) {
  const auto c = corpus_with_counts({5, 3, 9});
  EXPECT_EQ(subsample_per_intent(c, 1.0, 4), c);
}

TEST(Subsample, FloorKeepsOne) {
  const auto sub = subsample_per_intent(corpus_with_counts({3, 200}), 0.01, 2);
  std::map<std::string, int> per;
  for (const auto& e : sub) ++per[e.intent];
  EXPECT_EQ(per["Intent0"], 1);
  EXPECT_EQ(per["Intent1"], 2);
}

TEST(Subsample, SnipsSizedCounts) {
  const std::vector<std::size_t> counts = {1942, 2042, 2000, 2000, 1956, 1954, 1190};
  ASSERT_EQ(std::accumulate(counts.begin(), counts.end(), std::size_t{0}), 13084u);
  const auto corpus = corpus_with_counts(counts);
  const auto sub = subsample_per_intent(corpus, 0.0025, 11);
  std::size_t expect = 0;
  for (const auto n : counts) expect += std::max<std::size_t>(1, std::llround(0.0025 * n));
  EXPECT_EQ(sub.size(), expect);
  std::map<std::string, std::size_t> per;
  for (const auto& e : sub) ++per[e.intent];
  EXPECT_EQ(per.size(), 7u);
  for (std::size_t k = 0; k < counts.size(); ++k) {
    EXPECT_EQ(per["Intent" + std::to_string(k)],
              std::max<std::size_t>(1, std::llround(0.0025 * counts[k])));
  }
}

TEST(Subsample, DeterministicOrderedAndCovering) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ratio(0.001, 1.0);
  std::uniform_int_distribution<std::size_t> count(1, 60), intents(1, 12);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::size_t> counts(intents(rng));
    for (auto& c : counts) c = count(rng);
    const auto corpus = corpus_with_counts(counts);
    const double r = ratio(rng);
    const auto a = subsample_per_intent(corpus, r, trial);
    ASSERT_EQ(a, subsample_per_intent(corpus, r, trial));
    std::set<std::string> seen;
    for (const auto& e : a) seen.insert(e.intent);
    ASSERT_EQ(seen.size(), counts.size());
    // Survivors appear in input order.
    std::size_t pos = 0;
    for (const auto& e : a) {
      while (pos < corpus.size() && !(corpus[pos] == e)) ++pos;
      ASSERT_LT(pos++, corpus.size());
    }
  }
  const auto c = corpus_with_counts({50, 50});
  EXPECT_NE(subsample_per_intent(c, 0.2, 1), subsample_per_intent(c, 0.2, 2));
}

TEST(Subsample, Errors) {
  EXPECT_EQ(expect_code([] { subsample_per_intent({}, 0.5, 1); }), "empty_input");
  const auto c = corpus_with_counts({2});
  EXPECT_EQ(expect_code([&] { subsample_per_intent(c, 0.0, 1); }), "invalid_argument");
  EXPECT_EQ(expect_code([&] { subsample_per_intent(c, 1.5, 1); }), "invalid_argument");
}

TEST(Assemble, CardinalityProvenanceAndRoundTrip) {
  std::mt19937_64 rng(5);
  const auto schema = testing::random_schema(rng, 7, 10);
  std::vector<LabeledExample> real, synthetic;
  for (int i = 0; i < 33; ++i) real.push_back(testing::random_example(rng, schema));
  for (int i = 0; i < 3500; ++i) synthetic.push_back(testing::random_example(rng, schema));

  EXPECT_EQ(codec::examples_of(assemble_augmented_set(real, schema, {}, schema)), real);

  const auto out = assemble_augmented_set(real, schema, synthetic, schema);
  ASSERT_EQ(out.size(), 3533u);
  std::size_t n_real = 0, n_syn = 0;
  for (const auto& e : out) {
    (e.provenance == codec::Provenance::kReal ? n_real : n_syn)++;
  }
  EXPECT_EQ(n_real, 33u);
  EXPECT_EQ(n_syn, 3500u);
  for (const auto fmt : {codec::CorpusFormat::kConll, codec::CorpusFormat::kJsonl}) {
    std::stringstream ss;
    codec::write_corpus(ss, out, fmt);
    const auto back = codec::read_corpus(ss, fmt);
    ASSERT_EQ(back.size(), out.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
      ASSERT_EQ(back[i].example, out[i].example);
      ASSERT_EQ(back[i].provenance, out[i].provenance);
    }
  }
}

TEST(Assemble, SchemaMismatch) {
  const codec::SlotSchema a({"PlayMusic"}, {"artist"});
  const codec::SlotSchema b({"PlayMusic"}, {"artist", "city"});
  const std::vector<LabeledExample> ex = {{{"play", "x"}, {"O", "B-artist"}, "PlayMusic"}};
  EXPECT_EQ(expect_code([&] { assemble_augmented_set(ex, a, ex, b); }), "schema_mismatch");
  const std::vector<LabeledExample> bad = {{{"to", "x"}, {"O", "B-city"}, "PlayMusic"}};
  EXPECT_EQ(expect_code([&] { assemble_augmented_set(ex, a, bad, a); }), "schema_mismatch");
}

std::vector<std::string> numbered_prompts(std::size_t n) {
  std::vector<std::string> p;
  for (std::size_t i = 0; i < n; ++i) p.push_back("intent : play music ; p" + std::to_string(i) + " \"q\" \\ é");
  return p;
}

TEST(Generation, FileMode) {
  const auto dir = temp_dir("gen_file");
  const std::vector<std::string> lines = {"a b", "", "c"};
  write_generations_file(dir / "g.txt", lines);
  EXPECT_EQ(generations_from_file(dir / "g.txt", 3), lines);
  EXPECT_EQ(expect_code([&] { generations_from_file(dir / "g.txt", 4); }), "length_mismatch");
  EXPECT_EQ(expect_code([&] { write_generations_file(dir / "h.txt", {"a\nb"}); }),
            "malformed_response");
  fs::remove_all(dir);
}

TEST(Generation, EndpointEchoRoundTrip) {
  testing::EchoServer server;
  const auto prompts = numbered_prompts(3500);
  EndpointOptions o;
  o.url = server.url();
  o.batch_size = 64;
  EXPECT_EQ(generations_from_endpoint(prompts, o), prompts);
  EXPECT_EQ(server.calls(), 55);

  const auto dir = temp_dir("gen_echo");
  write_generations_file(dir / "g.txt", generations_from_endpoint(prompts, o));
  std::string expect;
  for (const auto& p : prompts) expect += p + "\n";
  EXPECT_EQ(testing::slurp(dir / "g.txt"), expect);
  fs::remove_all(dir);
}

TEST(Generation, EndpointLengthMismatch) {
  testing::EchoServer server([](const std::vector<std::string>& p, int&) {
    return std::vector<std::string>(p.begin(), p.end() - 1);
  });
  EndpointOptions o;
  o.url = server.url();
  o.batch_size = 5000;
  EXPECT_EQ(expect_code([&] { generations_from_endpoint(numbered_prompts(3500), o); }),
            "length_mismatch");
}

TEST(Generation, RetriesTransientFailures) {
  std::atomic<int> failures{2};
  testing::EchoServer server([&](const std::vector<std::string>& p, int& status) {
    if (failures-- > 0) status = 503;
    return p;
  });
  EndpointOptions o;
  o.url = server.url();
  o.backoff_ms = 5;
  o.parallelism = 1;
  const auto prompts = numbered_prompts(10);
  EXPECT_EQ(generations_from_endpoint(prompts, o), prompts);
  EXPECT_EQ(server.calls(), 3);

  failures = 100;
  o.max_retries = 2;
  EXPECT_EQ(expect_code([&] { generations_from_endpoint(prompts, o); }), "network_timeout");
}

TEST(Generation, TimeoutAndErrors) {
  testing::EchoServer slow([](const std::vector<std::string>& p, int&) {
    std::this_thread::sleep_for(std::chrono::milliseconds(400));
    return p;
  });
  EndpointOptions o;
  o.url = slow.url();
  o.timeout_ms = 100;
  o.max_retries = 1;
  o.backoff_ms = 1;
  EXPECT_EQ(expect_code([&] { generations_from_endpoint({"x"}, o); }), "network_timeout");

  testing::EchoServer bad_status([](const std::vector<std::string>& p, int& status) {
    status = 400;
    return p;
  });
  o.url = bad_status.url();
  o.timeout_ms = 2000;
  EXPECT_EQ(expect_code([&] { generations_from_endpoint({"x"}, o); }), "http_error");
  o.url = bad_status.url("/garbage");
  EXPECT_EQ(expect_code([&] { generations_from_endpoint({"x"}, o); }), "malformed_response");
  o.url = "https://example.com/x";
  EXPECT_EQ(expect_code([&] { generations_from_endpoint({"x"}, o); }), "invalid_url");
  o.url = "http://127.0.0.1:1/nothing";
  o.max_retries = 0;
  EXPECT_EQ(expect_code([&] { generations_from_endpoint({"x"}, o); }), "network_timeout");
}

TEST(RunningStats, MatchesTwoPassOracle) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> g(100.0, 3.0);
  std::vector<double> xs(37);
  RunningStats s;
  for (auto& x : xs) {
    x = g(rng);
    s.add(x);
  }
  double mean = 0;
  for (double x : xs) mean += x;
  mean /= xs.size();
  double var = 0;
  for (double x : xs) var += (x - mean) * (x - mean);
  var /= xs.size();
  EXPECT_NEAR(s.mean(), mean, 1e-12);
  EXPECT_NEAR(s.stddev(), std::sqrt(var), 1e-12);

  RunningStats one;
  one.add(4.5);
  EXPECT_EQ(one.stddev(), 0.0);
  RunningStats same;
  for (int i = 0; i < 4; ++i) same.add(0.1);
  EXPECT_EQ(same.stddev(), 0.0);
  EXPECT_DOUBLE_EQ(same.mean(), 0.1);
}

TEST(AggregateRuns, MeanStdAndConsistency) {
  auto run = [](double bleu, int accepted, int malformed) {
    RunRecord r;
    r.filter_summary = {{"total", accepted + malformed}, {"accepted", accepted},
                        {"rejected", malformed ? nlohmann::json{{"malformed_span", malformed}}
                                               : nlohmann::json::object()}};
    r.metrics.entries["bleu4"] = {bleu, metrics::Direction::kHigher};
    return r;
  };
  const auto j = aggregate_runs({run(0.2, 70, 30), run(0.4, 90, 0)});
  EXPECT_EQ(j["runs"], 2);
  EXPECT_DOUBLE_EQ(j["metrics"]["bleu4"]["mean"].get<double>(), 0.30000000000000004);
  EXPECT_NEAR(j["metrics"]["bleu4"]["std"].get<double>(), 0.1, 1e-15);
  EXPECT_EQ(j["metrics"]["bleu4"]["direction"], "higher");
  EXPECT_DOUBLE_EQ(j["filter"]["accepted"]["mean"].get<double>(), 80.0);
  EXPECT_DOUBLE_EQ(j["filter"]["rejected.malformed_span"]["mean"].get<double>(), 15.0);
  EXPECT_DOUBLE_EQ(j["filter"]["total"]["std"].get<double>(), 5.0);

  auto odd = run(0.1, 1, 0);
  odd.metrics.entries["fd.plain"] = {1.0, metrics::Direction::kLower};
  EXPECT_EQ(expect_code([&] { aggregate_runs({run(0.2, 1, 0), odd}); }), "inconsistent_runs");
  EXPECT_EQ(expect_code([&] { aggregate_runs({}); }), "empty_input");
}

TEST(Stages, ToyPipelineIsDeterministic) {
  const auto a = testing::run_toy_pipeline(temp_dir("run_a"), 17);
  const auto b = testing::run_toy_pipeline(temp_dir("run_b"), 17);
  for (const auto& [x, y] : {std::pair{a.prompts, b.prompts}, std::pair{a.filtered, b.filtered},
                             std::pair{a.report, b.report}}) {
    const auto bytes = testing::slurp(x);
    EXPECT_FALSE(bytes.empty());
    EXPECT_EQ(bytes, testing::slurp(y)) << x;
  }
  const auto summary = nlohmann::json::parse(testing::slurp(a.report.parent_path() / "filter_summary.json"));
  EXPECT_EQ(summary["total"], 35);
  EXPECT_EQ(summary["rejected"]["malformed_span"], 1);
  EXPECT_EQ(summary["rejected"]["unknown_slot_type"], 1);
  EXPECT_EQ(summary["rejected"]["unknown_intent"], 1);
  EXPECT_EQ(summary["rejected"]["missing_intent_header"], 1);
  const auto report = nlohmann::json::parse(testing::slurp(a.report));
  EXPECT_EQ(report["metrics"]["fd.plain"]["std"], 0.0);
  EXPECT_TRUE(report["metrics"].contains("perplexity.generated"));
  fs::remove_all(a.report.parent_path());
  fs::remove_all(b.report.parent_path());
}

TEST(Stages, GenerateNeedsOneSource) {
  GenerateStage g;
  g.prompts = testing::fixture("none.jsonl");
  EXPECT_EQ(expect_code([&] { run_generate(g); }), "invalid_config");
}

}  // namespace
}  // namespace auglang::pipeline
