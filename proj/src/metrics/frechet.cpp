#include "auglang/metrics/frechet.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "auglang/error.hpp"

namespace auglang::metrics {
namespace {

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
  const Eigen::VectorXd root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * root.asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace

GaussianMoments gaussian_moments(const EmbeddingMatrix& e) {
  if (e.rows() < 2) {
    throw Error("degenerate_sample", "moments need at least 2 rows, got " +
                                         std::to_string(e.rows()));
  }
  if (!e.allFinite()) throw Error("non_finite", "embedding matrix has non-finite values");
  const Eigen::Index d = e.cols();
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
  Eigen::MatrixXd m2 = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index i = 0; i < e.rows(); ++i) {
    const Eigen::VectorXd x = e.row(i).transpose();
    const Eigen::VectorXd before = x - mean;
    mean += before / static_cast<double>(i + 1);
    const Eigen::VectorXd after = x - mean;
    m2.noalias() += before * after.transpose();
  }
  Eigen::MatrixXd cov = m2 / static_cast<double>(e.rows() - 1);
  cov = (0.5 * (cov + cov.transpose())).eval();
  return {std::move(mean), std::move(cov)};
}

double frechet_distance(const GaussianMoments& a, const GaussianMoments& b) {
  if (a.mean.size() != b.mean.size()) {
    throw Error("dimension_mismatch", "embedding dimensions differ: " +
                                          std::to_string(a.mean.size()) + " vs " +
                                          std::to_string(b.mean.size()));
  }
  const Eigen::MatrixXd r1 = psd_sqrt(a.cov);
  Eigen::MatrixXd inner = r1 * b.cov * r1;
  inner = (0.5 * (inner + inner.transpose())).eval();
  const Eigen::VectorXd ev =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(inner, Eigen::EigenvaluesOnly).eigenvalues();
  const double tr_sqrt = ev.cwiseMax(0.0).cwiseSqrt().sum();
  const double fd =
      (a.mean - b.mean).squaredNorm() + a.cov.trace() + b.cov.trace() - 2.0 * tr_sqrt;
  return std::max(fd, 0.0);
}

double frechet_distance(const EmbeddingMatrix& a, const EmbeddingMatrix& b) {
  if (a.cols() != b.cols()) {
    throw Error("dimension_mismatch", "embedding dimensions differ: " +
                                          std::to_string(a.cols()) + " vs " +
                                          std::to_string(b.cols()));
  }
  return frechet_distance(gaussian_moments(a), gaussian_moments(b));
}

}  // namespace auglang::metrics
