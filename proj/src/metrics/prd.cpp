#include "auglang/metrics/prd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "auglang/error.hpp"

namespace auglang::metrics {

std::vector<double> prd_ratios(int num_angles) {
  if (num_angles < 3) throw Error("invalid_argument", "PRD needs at least 3 angles");
  constexpr double kEps = 1e-10;
  const double lo = kEps;
  const double hi = std::numbers::pi / 2 - kEps;
  std::vector<double> ratios(static_cast<std::size_t>(num_angles));
  for (int i = 0; i < num_angles; ++i) {
    ratios[static_cast<std::size_t>(i)] = std::tan(lo + (hi - lo) * i / (num_angles - 1));
  }
  return ratios;
}

std::vector<PrdPoint> prd_from_histograms(const std::vector<double>& p,
                                          const std::vector<double>& q,
                                          const std::vector<double>& ratios) {
  if (p.size() != q.size()) throw Error("dimension_mismatch", "histogram sizes differ");
  std::vector<PrdPoint> out;
  out.reserve(ratios.size());
  for (const double l : ratios) {
    double alpha = 0, beta = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      alpha += std::min(l * p[i], q[i]);
      beta += std::min(p[i], q[i] / l);
    }
    out.push_back({std::clamp(alpha, 0.0, 1.0), std::clamp(beta, 0.0, 1.0)});
  }
  return out;
}

double f_beta(double precision, double recall, double beta) {
  const double b2 = beta * beta;
  const double denom = b2 * precision + recall;
  return denom > 0 ? (1 + b2) * precision * recall / denom : 0.0;
}

void summarize(PrdCurve& curve) {
  curve.precision_score = 0;
  curve.recall_score = 0;
  for (const auto& pt : curve.points) {
    curve.precision_score = std::max(curve.precision_score, f_beta(pt.precision, pt.recall, 1.0 / 8));
    curve.recall_score = std::max(curve.recall_score, f_beta(pt.precision, pt.recall, 8.0));
  }
}

KMeansResult kmeans(const Eigen::MatrixXd& points, int k, int max_iterations, std::uint64_t seed) {
  const Eigen::Index n = points.rows();
  if (k < 1 || k > n) {
    throw Error("invalid_argument", "k-means needs 1 <= k <= n, got k=" + std::to_string(k));
  }
  std::mt19937_64 rng(seed);
  KMeansResult res;
  res.centroids.resize(k, points.cols());

  // k-means++ seeding.
  std::uniform_int_distribution<Eigen::Index> first(0, n - 1);
  res.centroids.row(0) = points.row(first(rng));
  Eigen::VectorXd best = (points.rowwise() - res.centroids.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    const double total = best.sum();
    Eigen::Index pick = 0;
    if (total > 0) {
      std::uniform_real_distribution<double> u(0.0, total);
      double r = u(rng);
      for (pick = 0; pick < n - 1; ++pick) {
        r -= best(pick);
        if (r < 0) break;
      }
    } else {
      pick = first(rng);
    }
    res.centroids.row(c) = points.row(pick);
    best = best.cwiseMin((points.rowwise() - res.centroids.row(c)).rowwise().squaredNorm());
  }

  res.assignment.assign(static_cast<std::size_t>(n), -1);
  for (res.iterations = 0; res.iterations < max_iterations; ++res.iterations) {
    // Squared distances up to the per-row constant |x|^2.
    const Eigen::MatrixXd cross = points * res.centroids.transpose();
    const Eigen::RowVectorXd cnorm = res.centroids.rowwise().squaredNorm().transpose();
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      Eigen::Index arg = 0;
      (cnorm - 2.0 * cross.row(i)).minCoeff(&arg);
      if (res.assignment[static_cast<std::size_t>(i)] != static_cast<int>(arg)) {
        res.assignment[static_cast<std::size_t>(i)] = static_cast<int>(arg);
        changed = true;
      }
    }
    if (!changed) break;
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, points.cols());
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      const int a = res.assignment[static_cast<std::size_t>(i)];
      sums.row(a) += points.row(i);
      ++counts[static_cast<std::size_t>(a)];
    }
    for (int c = 0; c < k; ++c) {
      // An emptied cluster keeps its previous centroid.
      if (counts[static_cast<std::size_t>(c)] > 0) {
        res.centroids.row(c) = sums.row(c) / counts[static_cast<std::size_t>(c)];
      }
    }
  }
  return res;
}

PrdCurve prd_curve(const EmbeddingMatrix& real, const EmbeddingMatrix& generated,
                   const PrdOptions& options) {
  if (real.cols() != generated.cols()) {
    throw Error("dimension_mismatch", "embedding dimensions differ");
  }
  const int k = options.num_clusters;
  if (k < 1 || real.rows() < k || generated.rows() < k) {
    throw Error("invalid_argument", "PRD cluster count " + std::to_string(k) +
                                        " exceeds a sample size (" + std::to_string(real.rows()) +
                                        ", " + std::to_string(generated.rows()) + ")");
  }
  if (options.num_runs < 1) throw Error("invalid_argument", "PRD needs num_runs >= 1");
  if (!real.allFinite() || !generated.allFinite()) {
    throw Error("non_finite", "embedding matrix has non-finite values");
  }
  Eigen::MatrixXd all(real.rows() + generated.rows(), real.cols());
  all << real, generated;
  const auto ratios = prd_ratios(options.num_angles);

  PrdCurve curve;
  curve.num_clusters = k;
  curve.points.assign(ratios.size(), {0.0, 0.0});
  std::vector<std::uint64_t> run_seeds(static_cast<std::size_t>(options.num_runs));
  {
    std::mt19937_64 seeder(options.seed);
    for (auto& s : run_seeds) s = seeder();
  }
  for (const auto run_seed : run_seeds) {
    const auto km = kmeans(all, k, options.max_iterations, run_seed);
    std::vector<double> p(static_cast<std::size_t>(k), 0.0), q(static_cast<std::size_t>(k), 0.0);
    for (Eigen::Index i = 0; i < all.rows(); ++i) {
      const auto c = static_cast<std::size_t>(km.assignment[static_cast<std::size_t>(i)]);
      (i < real.rows() ? p : q)[c] += 1.0;
    }
    for (auto& v : p) v /= static_cast<double>(real.rows());
    for (auto& v : q) v /= static_cast<double>(generated.rows());
    const auto pts = prd_from_histograms(p, q, ratios);
    for (std::size_t j = 0; j < pts.size(); ++j) {
      curve.points[j].precision += pts[j].precision / options.num_runs;
      curve.points[j].recall += pts[j].recall / options.num_runs;
    }
  }
  summarize(curve);
  return curve;
}

}  // namespace auglang::metrics
