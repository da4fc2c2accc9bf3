#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "auglang/mixoutlab/mixout.hpp"

namespace auglang::mixoutlab {

/// (K + lambda2 I)^{-1} Y through an LDL^T factorization. Throws
/// "singular_system" when the shifted matrix is numerically singular and
/// "invalid_argument" when K is not square and symmetric.
Eigen::VectorXd krr_solve(const Eigen::MatrixXd& k, const Eigen::VectorXd& y, double lambda2);

/// k(x, X)^T c for every row of `k_test_train` (n_test x n_train).
Eigen::VectorXd krr_predict(const Eigen::MatrixXd& k_test_train, const Eigen::VectorXd& coef);

struct RidgeGdOptions {
  std::int64_t max_steps = 200000;
  double lr = 0;  // 0: 1 / (lambda_max(K) + lambda2)
  double grad_tol = 1e-8;
  int divergence_window = 100;
};

struct RidgeGdResult {
  Eigen::VectorXd delta;  // w - u
  std::int64_t steps = 0;
  double grad_norm = 0;
  bool converged = false;
};

/// Full-batch gradient descent from delta = 0 on
///   1/2 |F delta - Y|^2 + lambda2/2 |delta|^2,
/// F = n x P feature matrix. Throws "divergence" when the objective rises for
/// `divergence_window` consecutive steps.
RidgeGdResult train_linearized_ridge(const Eigen::MatrixXd& features, const Eigen::VectorXd& y,
                                     double lambda2, const RidgeGdOptions& options = {});

/// How parameters are formed at test time after mixout training.
enum class TestTimeParams {
  kRaw,       // w itself, the mask mean
  kMaskOnes,  // Phi with M = 1, i.e. u + (w - u) / mu
};

/// Prediction offset at test time for a trained delta = w - u (f(x; u) = 0).
Eigen::VectorXd test_time_delta(const Eigen::VectorXd& delta, double mu, TestTimeParams mode);

struct MixoutSgdOptions {
  std::int64_t steps = 10000;
  double lr = 0;  // 0: mu / lambda_max(K)
  std::uint64_t seed = 0;
};

/// Training with a fresh mixout mask each step and no explicit penalty:
/// per step, grad = M (F^T (F Phi_delta - Y)) / mu with Phi_delta = M delta / mu.
/// Constant rate for the first half, then lr / (1 + 10 t / half); the returned
/// delta is the average of the iterates over the second half.
Eigen::VectorXd train_stochastic_mixout(const Eigen::MatrixXd& features, const Eigen::VectorXd& y,
                                        const MixoutConfig& config,
                                        const MixoutSgdOptions& options = {});

/// NTK regression problem on unit-sphere inputs with target sin(2 x0) + 0.5 x1.
struct NtkProblem {
  Eigen::MatrixXd x_train, x_test;
  Eigen::VectorXd y_train, y_test;
  Eigen::MatrixXd f_train, f_test;  // NTK features
  Eigen::MatrixXd k_train;          // f_train f_train^T
  Eigen::MatrixXd k_test;           // f_test f_train^T
};

NtkProblem make_ntk_problem(Eigen::Index width, Eigen::Index in_dim, Eigen::Index n_train,
                            Eigen::Index n_test, std::uint64_t seed);

struct NoiseProbeRow {
  double lambda2 = 0;
  double train_mse_noisy = 0;  // fit to the corrupted training labels
  double test_mse_clean = 0;
};

struct NoiseProbeResult {
  std::vector<NoiseProbeRow> rows;  // grid order
  std::vector<std::size_t> flipped;  // indices whose label was negated
  bool train_fit_monotone = false;  // train_mse_noisy non-decreasing in lambda2
};

/// Negates exactly round(noise_rate * n) training labels, then solves KRR for
/// each lambda2 of the (ascending) grid.
NoiseProbeResult noise_robustness_probe(const Eigen::MatrixXd& k_train,
                                        const Eigen::MatrixXd& k_test,
                                        const Eigen::VectorXd& y_train_clean,
                                        const Eigen::VectorXd& y_test_clean, double noise_rate,
                                        const std::vector<double>& lambda2_grid,
                                        std::uint64_t seed);

}  // namespace auglang::mixoutlab
