#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <numbers>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "auglang/error.hpp"
#include "auglang/metrics/bleu.hpp"
#include "auglang/metrics/embeddings.hpp"
#include "auglang/metrics/frechet.hpp"
#include "auglang/metrics/kendall.hpp"
#include "auglang/metrics/perplexity.hpp"
#include "auglang/metrics/prd.hpp"
#include "auglang/metrics/report.hpp"
#include "../support/metric_oracles.hpp"

namespace auglang::metrics {
namespace {

using testing::enumerate_pairs;
using testing::naive_bleu;
using testing::random_matrix;
using testing::words;

TEST(Bleu, HandComputedValues) {
  EXPECT_NEAR(corpus_bleu4({words("a b c d e")}, {words("a b c d f")}), std::pow(0.2, 0.25), 1e-12);
  EXPECT_NEAR(corpus_bleu4({words("a b c d")}, {words("a b c d e f")}), std::exp(-0.5), 1e-12);
  EXPECT_NEAR(corpus_bleu4({words("the the the the")}, {words("the cat")}),
              std::pow(0.25 * 1e-27, 0.25), 1e-15);
  EXPECT_DOUBLE_EQ(corpus_bleu4({words("x y z w")}, {words("x y z w")}), 1.0);
  EXPECT_LE(corpus_bleu4({words("p q r s")}, {words("a b c d")}), 1e-9 * (1 + 1e-12));
}

TEST(Bleu, MatchesNaiveOracleOnSmallCorpora) {
  const std::vector<TokenSeq> cands = {words("the cat sat on the mat"), words("a dog ran"),
                                       words("play some jazz by miles davis")};
  const std::vector<TokenSeq> refs = {words("the cat is on the mat"), words("a dog ran away fast"),
                                      words("play jazz by miles davis please")};
  EXPECT_NEAR(corpus_bleu4(cands, refs), naive_bleu(cands, refs), 1e-12);

  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> tok(0, 4), len(1, 9), cnt(1, 5);
  for (int trial = 0; trial < 200; ++trial) {
    auto gen = [&] {
      std::vector<TokenSeq> c(static_cast<std::size_t>(cnt(rng)));
      for (auto& s : c) {
        s.resize(static_cast<std::size_t>(len(rng)));
        for (auto& w : s) w = std::string(1, static_cast<char>('a' + tok(rng)));
      }
      return c;
    };
    const auto c = gen(), r = gen();
    ASSERT_NEAR(corpus_bleu4(c, r), naive_bleu(c, r), 1e-9);
  }
}

TEST(Bleu, SentenceAveraging) {
  const std::vector<TokenSeq> cands = {words("a b c d e"), words("a b c d")};
  const std::vector<TokenSeq> refs = {words("a b c d f")};
  BleuOptions opt;
  opt.averaging = BleuAveraging::kSentence;
  EXPECT_NEAR(corpus_bleu4(cands, refs, opt),
              (naive_bleu({cands[0]}, refs) + naive_bleu({cands[1]}, refs)) / 2, 1e-12);
}

TEST(Bleu, PermutationInvariance) {
  std::vector<TokenSeq> c = {words("a b c"), words("b c d e"), words("x a b c d")};
  const std::vector<TokenSeq> r = {words("a b c d"), words("c d e")};
  const double base = corpus_bleu4(c, r);
  const double self = self_bleu4(c);
  std::reverse(c.begin(), c.end());
  EXPECT_DOUBLE_EQ(corpus_bleu4(c, r), base);
  EXPECT_NEAR(self_bleu4(c), self, 1e-15);
}

TEST(SelfBleu, LeaveOneOutOracle) {
  const std::vector<TokenSeq> corpus = {words("the cat sat on the mat"), words("the cat sat"),
                                        words("on the mat the cat sat"), words("a b c d e f")};
  EXPECT_NEAR(self_bleu4(corpus), testing::naive_self_bleu(corpus), 1e-12);
}

TEST(SelfBleu, IdenticalAndDisjoint) {
  EXPECT_DOUBLE_EQ(self_bleu4({words("a b c d"), words("a b c d"), words("a b c d")}), 1.0);
  EXPECT_LE(self_bleu4({words("a b c d"), words("e f g h"), words("i j k l")}), 1e-9 * (1 + 1e-12));
  EXPECT_THROW(self_bleu4({words("a")}), Error);
  EXPECT_THROW(corpus_bleu4({}, {words("a")}), Error);
}

TEST(Perplexity, ClosedForms) {
  EXPECT_DOUBLE_EQ(perplexity({{0, 0}, {0}}), 1.0);
  const double l2 = -std::numbers::ln2;
  EXPECT_NEAR(perplexity({{l2, l2, l2}, {l2}}), 2.0, 1e-12);
  const std::vector<LogprobRecord> mixed = {{-1.5, -0.25}, {}, {-3.0, -0.125, -2.0}};
  double sum = 0;
  int n = 0;
  for (const auto& r : mixed) {
    for (double v : r) {
      sum += v;
      ++n;
    }
  }
  EXPECT_NEAR(perplexity(mixed), std::exp(-sum / n), 1e-12);
  EXPECT_THROW(perplexity({{}}), Error);
  EXPECT_THROW(perplexity({{-INFINITY}}), Error);
}

TEST(Perplexity, JsonlRoundTripAndErrors) {
  const std::vector<LogprobRecord> recs = {{-0.1, -2.5}, {-1.0 / 3}};
  std::stringstream ss;
  write_logprob_jsonl(ss, recs);
  EXPECT_EQ(read_logprob_jsonl(ss), recs);
  std::istringstream bad1("{\"logprobs\": [1, \"x\"]}\n");
  EXPECT_THROW(read_logprob_jsonl(bad1), Error);
  std::istringstream bad2("{\"lp\": []}\n");
  EXPECT_THROW(read_logprob_jsonl(bad2), Error);
  EXPECT_THROW(read_logprob_file("/nonexistent/lp.jsonl"), Error);
}

TEST(Emb1, ExactBytesAndRoundTrip) {
  Eigen::MatrixXd m(2, 3);
  m << 1, -2, 0.5, 3, 0, -0.25;
  std::stringstream ss;
  write_emb1(ss, m);
  const std::string bytes = ss.str();
  ASSERT_EQ(bytes.size(), 12u + 24u);
  EXPECT_EQ(bytes.substr(0, 12), std::string("EMB1\x02\0\0\0\x03\0\0\0", 12));
  // 1.0f = 0x3f800000 little-endian.
  EXPECT_EQ(bytes.substr(12, 4), std::string("\0\0\x80\x3f", 4));
  EXPECT_EQ(read_emb1(ss), m);

  std::mt19937_64 rng(1);
  const Eigen::MatrixXd r = random_matrix(rng, 7, 5);
  std::stringstream s2;
  write_emb1(s2, r);
  EXPECT_EQ(read_emb1(s2), r.cast<float>().cast<double>());
}

TEST(Emb1, RejectsMalformed) {
  auto expect_code = [](const std::string& bytes, const std::string& code) {
    std::istringstream in(bytes);
    try {
      read_emb1(in);
      FAIL() << "expected " << code;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), code);
    }
  };
  const std::string hdr("EMB1\x01\0\0\0\x01\0\0\0", 12);
  expect_code("EMB", "emb1_format");
  expect_code(std::string("EMB2\x01\0\0\0\x01\0\0\0\0\0\0\0", 16), "emb1_format");
  expect_code(hdr + std::string("\0\0", 2), "emb1_format");
  expect_code(hdr + std::string("\0\0\0\0\0", 5), "emb1_format");
  expect_code(hdr + std::string("\0\0\xc0\x7f", 4), "non_finite");
  expect_code(std::string("EMB1\xff\xff\xff\xff\xff\xff\xff\xff", 12), "emb1_format");
  EXPECT_THROW(read_emb1_file("/nonexistent.emb1"), Error);
}

TEST(Moments, HandAndTwoPassOracle) {
  Eigen::MatrixXd two(2, 1);
  two << 0, 2;
  const auto m = gaussian_moments(two);
  EXPECT_DOUBLE_EQ(m.mean(0), 1.0);
  EXPECT_DOUBLE_EQ(m.cov(0, 0), 2.0);

  Eigen::MatrixXd same = Eigen::MatrixXd::Ones(5, 3) * 4.2;
  EXPECT_LE(gaussian_moments(same).cov.cwiseAbs().maxCoeff(), 1e-14);

  std::mt19937_64 rng(2);
  const Eigen::MatrixXd e = random_matrix(rng, 100, 5, 3.0).array() + 10.0;
  const auto got = gaussian_moments(e);
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(5);
  for (int i = 0; i < 100; ++i) mean += e.row(i).transpose();
  mean /= 100;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(5, 5);
  for (int i = 0; i < 100; ++i) {
    const Eigen::VectorXd c = e.row(i).transpose() - mean;
    cov += c * c.transpose();
  }
  cov /= 99;
  EXPECT_LE((got.mean - mean).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LE((got.cov - cov).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_EQ(got.cov, got.cov.transpose());
  EXPECT_THROW(gaussian_moments(Eigen::MatrixXd(1, 3)), Error);
}

TEST(Frechet, IdentitySymmetryRotation) {
  std::mt19937_64 rng(3);
  const Eigen::MatrixXd a = random_matrix(rng, 500, 16);
  const Eigen::MatrixXd b = random_matrix(rng, 400, 16, 1.5).array() + 0.3;
  EXPECT_LE(frechet_distance(a, a), 1e-8);
  const double ab = frechet_distance(a, b);
  EXPECT_NEAR(ab, frechet_distance(b, a), 1e-8);
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(random_matrix(rng, 16, 16))
                                .householderQ();
  EXPECT_NEAR(frechet_distance(Eigen::MatrixXd(a * q), Eigen::MatrixXd(b * q)), ab, 1e-6);
}

TEST(Frechet, OneDimensionalClosedForm) {
  std::mt19937_64 rng(4);
  const Eigen::MatrixXd a = random_matrix(rng, 300, 1, 2.0);
  const Eigen::MatrixXd b = random_matrix(rng, 200, 1, 0.5).array() + 1.0;
  auto stats = [](const Eigen::MatrixXd& x) {
    const double m = x.mean();
    return std::pair{m, (x.array() - m).square().sum() / (x.rows() - 1)};
  };
  const auto [m1, v1] = stats(a);
  const auto [m2, v2] = stats(b);
  const double expect = (m1 - m2) * (m1 - m2) + std::pow(std::sqrt(v1) - std::sqrt(v2), 2);
  EXPECT_NEAR(frechet_distance(a, b), expect, 1e-6);
}

TEST(Frechet, DiagonalClosedForm) {
  GaussianMoments a{Eigen::Vector3d(1, 2, 3), Eigen::Vector3d(4, 0.25, 9).asDiagonal()};
  GaussianMoments b{Eigen::Vector3d(0, 2, 5), Eigen::Vector3d(1, 1, 16).asDiagonal()};
  const double expect = 1 + 0 + 4 + std::pow(2 - 1, 2) + std::pow(0.5 - 1, 2) + std::pow(3 - 4, 2);
  EXPECT_NEAR(frechet_distance(a, b), expect, 1e-12);
  EXPECT_THROW(frechet_distance(Eigen::MatrixXd(3, 2), Eigen::MatrixXd(3, 3)), Error);
}

TEST(Prd, HistogramCurveMatchesDirectMinSum) {
  const std::vector<double> p = {0.5, 0.5, 0.0}, q = {0.0, 0.5, 0.5};
  const auto ratios = prd_ratios(1001);
  ASSERT_EQ(ratios.size(), 1001u);
  const auto pts = prd_from_histograms(p, q, ratios);
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    const double l = ratios[i];
    double alpha = 0;
    for (int j = 0; j < 3; ++j) alpha += std::min(l * p[j], q[j]);
    EXPECT_NEAR(pts[i].precision, std::min(alpha, 1.0), 1e-12);
    EXPECT_NEAR(pts[i].recall, std::min(alpha / l, 1.0), 1e-12);
  }
}

TEST(Prd, MonotoneAndBoundedOnRandomHistograms) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0, 1);
  const auto ratios = prd_ratios(201);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> p(8), q(8);
    for (auto& v : p) v = u(rng) < 0.3 ? 0 : u(rng);
    for (auto& v : q) v = u(rng) < 0.3 ? 0 : u(rng);
    p[0] += 1e-3;
    q[1] += 1e-3;
    const double sp = std::accumulate(p.begin(), p.end(), 0.0);
    const double sq = std::accumulate(q.begin(), q.end(), 0.0);
    for (auto& v : p) v /= sp;
    for (auto& v : q) v /= sq;
    const auto pts = prd_from_histograms(p, q, ratios);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      ASSERT_GE(pts[i].precision, 0.0);
      ASSERT_LE(pts[i].precision, 1.0);
      ASSERT_GE(pts[i].recall, 0.0);
      ASSERT_LE(pts[i].recall, 1.0);
      if (i > 0) {
        ASSERT_GE(pts[i].precision, pts[i - 1].precision);
        ASSERT_LE(pts[i].recall, pts[i - 1].recall);
      }
    }
  }
}

TEST(Prd, IdenticalAndSeparatedSamples) {
  std::mt19937_64 rng(7);
  const Eigen::MatrixXd a = random_matrix(rng, 1000, 8);
  PrdOptions opt;
  opt.num_runs = 3;
  const auto same = prd_curve(a, a, opt);
  EXPECT_GE(same.precision_score, 0.99);
  EXPECT_GE(same.recall_score, 0.99);

  Eigen::MatrixXd b = random_matrix(rng, 1000, 8);
  b.col(0).array() += 100.0;
  const auto apart = prd_curve(a, b, opt);
  EXPECT_LE(apart.precision_score, 0.05);
  EXPECT_LE(apart.recall_score, 0.05);

  const auto again = prd_curve(a, b, opt);
  EXPECT_EQ(again.precision_score, apart.precision_score);
  EXPECT_THROW(prd_curve(a.topRows(10), b, opt), Error);
}

TEST(Prd, FBetaSummary) {
  PrdCurve c;
  c.points = {{1.0, 0.2}, {0.5, 0.5}, {0.2, 1.0}};
  summarize(c);
  EXPECT_NEAR(c.precision_score, f_beta(1.0, 0.2, 0.125), 1e-15);
  EXPECT_NEAR(c.recall_score, f_beta(0.2, 1.0, 8.0), 1e-15);
  EXPECT_NEAR(f_beta(0.5, 0.5, 8), 0.5, 1e-15);
}

TEST(KMeans, SeededAndSeparatesBlobs) {
  std::mt19937_64 rng(8);
  Eigen::MatrixXd pts = random_matrix(rng, 90, 2, 0.1);
  pts.block(30, 0, 30, 1).array() += 10;
  pts.block(60, 1, 30, 1).array() += 10;
  const auto r1 = kmeans(pts, 3, 100, 42);
  const auto r2 = kmeans(pts, 3, 100, 42);
  EXPECT_EQ(r1.assignment, r2.assignment);
  for (int blob = 0; blob < 3; ++blob) {
    for (int i = 1; i < 30; ++i) EXPECT_EQ(r1.assignment[blob * 30 + i], r1.assignment[blob * 30]);
  }
  EXPECT_NE(r1.assignment[0], r1.assignment[30]);
  EXPECT_NE(r1.assignment[30], r1.assignment[60]);
}

TEST(Kendall, ExactAgainstPairEnumeration) {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> small(0, 12);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> x(200), y(200);
    for (auto& v : x) v = small(rng);
    for (auto& v : y) v = small(rng) * 0.5;
    const auto fast = kendall_counts(x, y);
    const auto slow = enumerate_pairs(x, y);
    ASSERT_EQ(fast.s, slow.s);
    ASSERT_EQ(fast.n1, slow.n1);
    ASSERT_EQ(fast.n2, slow.n2);
    const double tau = static_cast<double>(slow.s) /
                       (std::sqrt(static_cast<double>(slow.n0 - slow.n1)) *
                        std::sqrt(static_cast<double>(slow.n0 - slow.n2)));
    ASSERT_EQ(kendall_tau(x, y), tau);
    ASSERT_EQ(kendall_tau(y, x), kendall_tau(x, y));
  }
}

TEST(Kendall, ExamplesAndProperties) {
  const std::vector<double> inc = {1, 2, 3, 4, 5};
  const std::vector<double> dec = {5, 4, 3, 2, 1};
  EXPECT_DOUBLE_EQ(kendall_tau(inc, inc), 1.0);
  EXPECT_DOUBLE_EQ(kendall_tau(inc, dec), -1.0);
  std::mt19937_64 rng(10);
  std::normal_distribution<double> g;
  std::vector<double> x(50), y(50), ny(50);
  for (int i = 0; i < 50; ++i) {
    x[i] = g(rng);
    y[i] = x[i] + g(rng);
    ny[i] = -y[i];
  }
  EXPECT_DOUBLE_EQ(kendall_tau(x, ny), -kendall_tau(x, y));
  const std::vector<double> flat = {2, 2, 2};
  try {
    kendall_tau(flat, std::vector<double>{1, 2, 3});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "undefined_correlation");
  }
  EXPECT_THROW(kendall_tau(inc, std::vector<double>{1, 2}), Error);
}

TEST(MetricReport, IdenticalInputsAndRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "auglang_metrics_test";
  std::filesystem::create_directories(dir);
  std::mt19937_64 rng(11);
  const Eigen::MatrixXd e = random_matrix(rng, 200, 6);
  write_emb1_file(dir / "real.emb1", e);
  write_emb1_file(dir / "fake.emb1", e);
  {
    std::ofstream lp(dir / "lp.jsonl");
    write_logprob_jsonl(lp, {{-1.0, -2.0}, {-0.5}});
  }
  MetricInputs in;
  in.real_sentences = {words("play some jazz"), words("book a flight to paris"), words("hi")};
  in.generated_sentences = in.real_sentences;
  in.embeddings = {{"augmented", dir / "real.emb1", dir / "fake.emb1"}};
  in.generated_logprobs = dir / "lp.jsonl";
  in.prd.num_runs = 2;
  const auto report = metric_report(in);
  EXPECT_DOUBLE_EQ(report.entries.at("bleu4").value, 1.0);
  EXPECT_LE(report.entries.at("fd.augmented").value, 1e-8);
  EXPECT_GE(report.entries.at("prd_precision.augmented").value, 0.99);
  EXPECT_GE(report.entries.at("prd_recall.augmented").value, 0.99);
  EXPECT_NEAR(report.entries.at("perplexity.generated").value, std::exp(3.5 / 3), 1e-12);
  EXPECT_EQ(report.entries.at("fd.augmented").direction, Direction::kLower);
  EXPECT_FALSE(report.entries.count("fd.plain"));

  const auto parsed = MetricReport::from_json(nlohmann::json::parse(report.to_json().dump()));
  EXPECT_EQ(parsed, report);

  in.embeddings = {{"plain", dir / "missing.emb1", dir / "fake.emb1"}};
  try {
    metric_report(in);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "file_not_found");
  }
  EXPECT_THROW(MetricReport::from_json(nlohmann::json::parse(R"({"x": {"value": 1}})")), Error);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace auglang::metrics
