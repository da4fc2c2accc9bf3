#pragma once

#include <cstdint>
#include <vector>

#include "auglang/metrics/embeddings.hpp"

namespace auglang::metrics {

struct PrdOptions {
  int num_clusters = 20;
  int num_angles = 1001;
  // Independent clusterings whose curves are averaged.
  int num_runs = 10;
  int max_iterations = 100;
  std::uint64_t seed = 0;
};

struct PrdPoint {
  double precision;  // alpha
  double recall;     // beta
};

struct PrdCurve {
  std::vector<PrdPoint> points;  // one per ratio, ratios increasing
  int num_clusters = 0;
  double precision_score = 0;  // max F_{1/8}
  double recall_score = 0;     // max F_8
};

/// tan of num_angles angles evenly spaced in [1e-10, pi/2 - 1e-10].
std::vector<double> prd_ratios(int num_angles);

/// Curve for fixed histograms: alpha = sum min(l P, Q), beta = sum min(P, Q / l).
/// P is the reference (real) histogram, Q the evaluated one.
std::vector<PrdPoint> prd_from_histograms(const std::vector<double>& p,
                                          const std::vector<double>& q,
                                          const std::vector<double>& ratios);

double f_beta(double precision, double recall, double beta);

/// Fills precision_score and recall_score from curve.points.
void summarize(PrdCurve& curve);

struct KMeansResult {
  Eigen::MatrixXd centroids;         // k x d
  std::vector<int> assignment;       // per row
  int iterations = 0;
};

/// Lloyd iterations from a k-means++ start; deterministic for a given seed.
KMeansResult kmeans(const Eigen::MatrixXd& points, int k, int max_iterations, std::uint64_t seed);

/// `real` is the reference sample, `generated` the evaluated one.
PrdCurve prd_curve(const EmbeddingMatrix& real, const EmbeddingMatrix& generated,
                   const PrdOptions& options = {});

}  // namespace auglang::metrics
