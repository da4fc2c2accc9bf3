#pragma once

#include "auglang/metrics/embeddings.hpp"

namespace auglang::metrics {

struct GaussianMoments {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;  // unbiased (n - 1), exactly symmetric
};

/// One-pass (Welford) sample mean and covariance. Requires n >= 2.
GaussianMoments gaussian_moments(const EmbeddingMatrix& e);

/// |mu1 - mu2|^2 + Tr(S1 + S2 - 2 (S1 S2)^(1/2)), clamped to >= 0. The trace of
/// the square root comes from the eigenvalues of sqrt(S1) S2 sqrt(S1).
double frechet_distance(const GaussianMoments& a, const GaussianMoments& b);
double frechet_distance(const EmbeddingMatrix& a, const EmbeddingMatrix& b);

}  // namespace auglang::metrics
