#include "auglang/mixoutlab/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "auglang/error.hpp"
#include "auglang/mixoutlab/network.hpp"
#include "mask_sampler.hpp"

namespace auglang::mixoutlab {
namespace {

double lambda_max(const Eigen::MatrixXd& k) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(k, Eigen::EigenvaluesOnly)
      .eigenvalues()
      .maxCoeff();
}

}  // namespace

Eigen::VectorXd krr_solve(const Eigen::MatrixXd& k, const Eigen::VectorXd& y, double lambda2) {
  if (k.rows() != k.cols() || k.rows() != y.size() || k.rows() == 0) {
    throw Error("invalid_argument", "kernel must be square and match the label count");
  }
  if (!(lambda2 >= 0) || !std::isfinite(lambda2)) {
    throw Error("invalid_argument", "lambda2 must be finite and >= 0");
  }
  const double scale = std::max(k.cwiseAbs().maxCoeff(), 1.0);
  if ((k - k.transpose()).cwiseAbs().maxCoeff() > 1e-8 * scale) {
    throw Error("invalid_argument", "kernel matrix is not symmetric");
  }
  Eigen::MatrixXd shifted = k;
  shifted.diagonal().array() += lambda2;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(shifted);
  if (ldlt.info() != Eigen::Success || ldlt.rcond() < 1e-14) {
    throw Error("singular_system", "K + lambda2 I is numerically singular");
  }
  return ldlt.solve(y);
}

Eigen::VectorXd krr_predict(const Eigen::MatrixXd& k_test_train, const Eigen::VectorXd& coef) {
  if (k_test_train.cols() != coef.size()) {
    throw Error("dimension_mismatch", "cross-kernel columns must match the coefficient count");
  }
  return k_test_train * coef;
}

RidgeGdResult train_linearized_ridge(const Eigen::MatrixXd& features, const Eigen::VectorXd& y,
                                     double lambda2, const RidgeGdOptions& options) {
  if (features.rows() != y.size()) throw Error("dimension_mismatch", "feature rows != labels");
  const double lr =
      options.lr > 0 ? options.lr : 1.0 / (lambda_max(features * features.transpose()) + lambda2);
  RidgeGdResult res;
  res.delta = Eigen::VectorXd::Zero(features.cols());
  double prev_loss = INFINITY;
  int rising = 0;
  for (res.steps = 0; res.steps < options.max_steps; ++res.steps) {
    const Eigen::VectorXd r = features * res.delta - y;
    const double loss = 0.5 * r.squaredNorm() + 0.5 * lambda2 * res.delta.squaredNorm();
    if (!std::isfinite(loss)) throw Error("divergence", "objective became non-finite");
    rising = loss > prev_loss ? rising + 1 : 0;
    if (rising >= options.divergence_window) {
      throw Error("divergence", "objective rose for " + std::to_string(rising) +
                                    " consecutive steps");
    }
    prev_loss = loss;
    const Eigen::VectorXd grad = features.transpose() * r + lambda2 * res.delta;
    res.grad_norm = grad.norm();
    if (res.grad_norm <= options.grad_tol) {
      res.converged = true;
      return res;
    }
    res.delta -= lr * grad;
  }
  return res;
}

Eigen::VectorXd test_time_delta(const Eigen::VectorXd& delta, double mu, TestTimeParams mode) {
  return mode == TestTimeParams::kRaw ? delta : Eigen::VectorXd(delta / mu);
}

Eigen::VectorXd train_stochastic_mixout(const Eigen::MatrixXd& features, const Eigen::VectorXd& y,
                                        const MixoutConfig& config,
                                        const MixoutSgdOptions& options) {
  config.validate();
  if (features.rows() != y.size()) throw Error("dimension_mismatch", "feature rows != labels");
  if (options.steps < 2) throw Error("invalid_argument", "need at least 2 steps");
  const double mu = config.mu();
  const double lr0 =
      options.lr > 0 ? options.lr : mu / lambda_max(features * features.transpose());
  const Eigen::Index p = features.cols();
  detail::MaskSampler sampler(mu, options.seed);
  Eigen::VectorXd delta = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd avg = Eigen::VectorXd::Zero(p);
  Eigen::VectorXd mask(p), eff(p);
  const std::int64_t half = options.steps / 2;
  for (std::int64_t t = 0; t < options.steps; ++t) {
    sampler.fill(p, [&](Eigen::Index i, bool keep) { mask(i) = keep ? 1.0 : 0.0; });
    eff = mask.cwiseProduct(delta) / mu;
    const Eigen::VectorXd r = features * eff - y;
    const double lr = t < half ? lr0 : lr0 / (1.0 + 10.0 * static_cast<double>(t - half) /
                                                        static_cast<double>(half));
    delta.noalias() -= (lr / mu) * mask.cwiseProduct(features.transpose() * r);
    if (t >= half) avg += delta;
  }
  return avg / static_cast<double>(options.steps - half);
}

NtkProblem make_ntk_problem(Eigen::Index width, Eigen::Index in_dim, Eigen::Index n_train,
                            Eigen::Index n_test, std::uint64_t seed) {
  if (in_dim < 2) throw Error("invalid_argument", "the target needs in_dim >= 2");
  const ZeroInitHead head(width, in_dim, 1, seed);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> g;
  auto sphere = [&](Eigen::Index n) {
    Eigen::MatrixXd x(n, in_dim);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < in_dim; ++j) x(i, j) = g(rng);
      x.row(i).normalize();
    }
    return x;
  };
  auto target = [](const Eigen::MatrixXd& x) {
    return Eigen::VectorXd((2.0 * x.col(0).array()).sin() + 0.5 * x.col(1).array());
  };
  NtkProblem p;
  p.x_train = sphere(n_train);
  p.x_test = sphere(n_test);
  p.y_train = target(p.x_train);
  p.y_test = target(p.x_test);
  p.f_train = ntk_features(head, p.x_train);
  p.f_test = ntk_features(head, p.x_test);
  p.k_train = p.f_train * p.f_train.transpose();
  p.k_train = (0.5 * (p.k_train + p.k_train.transpose())).eval();
  p.k_test = p.f_test * p.f_train.transpose();
  return p;
}

NoiseProbeResult noise_robustness_probe(const Eigen::MatrixXd& k_train,
                                        const Eigen::MatrixXd& k_test,
                                        const Eigen::VectorXd& y_train_clean,
                                        const Eigen::VectorXd& y_test_clean, double noise_rate,
                                        const std::vector<double>& lambda2_grid,
                                        std::uint64_t seed) {
  if (!(noise_rate >= 0 && noise_rate < 1)) {
    throw Error("invalid_argument", "noise_rate must lie in [0, 1)");
  }
  if (!std::is_sorted(lambda2_grid.begin(), lambda2_grid.end())) {
    throw Error("invalid_argument", "lambda2 grid must be ascending");
  }
  const auto n = static_cast<std::size_t>(y_train_clean.size());
  NoiseProbeResult out;
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed);
  const auto flips = static_cast<std::size_t>(std::llround(noise_rate * static_cast<double>(n)));
  std::sample(idx.begin(), idx.end(), std::back_inserter(out.flipped), flips, rng);
  Eigen::VectorXd noisy = y_train_clean;
  for (const auto i : out.flipped) noisy(static_cast<Eigen::Index>(i)) *= -1.0;

  out.train_fit_monotone = true;
  for (const double l2 : lambda2_grid) {
    const Eigen::VectorXd c = krr_solve(k_train, noisy, l2);
    NoiseProbeRow row;
    row.lambda2 = l2;
    row.train_mse_noisy = (k_train * c - noisy).squaredNorm() / static_cast<double>(n);
    row.test_mse_clean =
        (krr_predict(k_test, c) - y_test_clean).squaredNorm() / static_cast<double>(y_test_clean.size());
    if (!out.rows.empty() && row.train_mse_noisy < out.rows.back().train_mse_noisy) {
      out.train_fit_monotone = false;
    }
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace auglang::mixoutlab
