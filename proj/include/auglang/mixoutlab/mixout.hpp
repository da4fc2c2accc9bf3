#pragma once

#include <cstdint>
#include <functional>

#include <Eigen/Dense>

namespace auglang::mixoutlab {

struct MixoutConfig {
  // Probability that a coordinate takes the pretrained value; the keep mask
  // is M_i ~ Bernoulli(1 - p_replace).
  double p_replace = 0.05;
  // Strong-convexity constant of the target loss.
  double m = 1.0;

  double mu() const { return 1.0 - p_replace; }
  double sigma2() const { return p_replace * (1.0 - p_replace); }
  double lambda2() const { return m * sigma2() / (mu() * mu()); }
  /// Throws "invalid_config" unless 0 < p_replace < 1 and m > 0.
  void validate() const;
};

/// Phi = (M w + (I - M) u - (1 - mu) u) / mu, elementwise. Mask entries must be 0 or 1.
Eigen::VectorXd apply_mixout(const Eigen::VectorXd& w, const Eigen::VectorXd& u,
                             const Eigen::VectorXd& mask, double mu);

/// Sum of per-coordinate losses l_i(theta_i) with a known strong-convexity constant.
struct SeparableLoss {
  std::function<double(Eigen::Index, double)> term;
  double m = 1.0;

  double operator()(const Eigen::VectorXd& theta) const;
};

/// (m/2) |theta - target|^2.
SeparableLoss quadratic_loss(Eigen::VectorXd target, double m);
/// (m/2) (x - t)^2 + log cosh(x - t) per coordinate: m-strongly convex, not quadratic.
SeparableLoss logcosh_loss(Eigen::VectorXd target, double m);

struct ExpectedLossCheck {
  double lhs = 0;  // E[L(Phi)] over the mask distribution
  double rhs = 0;  // L(w) + (m sigma^2 / 2 mu^2) |w - u|^2
  double gap = 0;  // |lhs - rhs|
};

/// Quadratic case: lhs from the mask moments,
/// E[(Phi_i - t_i)^2] = (u_i - t_i)^2 + 2 (u_i - t_i) d_i + d_i^2 (mu^2 + sigma^2) / mu^2.
ExpectedLossCheck expected_loss_quadratic(const Eigen::VectorXd& w, const Eigen::VectorXd& u,
                                 const Eigen::VectorXd& target, const MixoutConfig& config);

/// Any separable loss: lhs is the exact expectation over the two-point law of
/// each Phi_i. For an m-strongly convex loss lhs >= rhs.
ExpectedLossCheck expected_loss_separable(const Eigen::VectorXd& w, const Eigen::VectorXd& u,
                                 const SeparableLoss& loss, const MixoutConfig& config);

struct MonteCarloEstimate {
  double mean = 0;
  double std_error = 0;
};

/// Sample mean of L(Phi) over `samples` Bernoulli(mu) masks.
MonteCarloEstimate monte_carlo_loss(const Eigen::VectorXd& w, const Eigen::VectorXd& u,
                                    const SeparableLoss& loss, const MixoutConfig& config,
                                    std::int64_t samples, std::uint64_t seed);

/// Sample mean of Phi over `samples` masks, per coordinate.
Eigen::VectorXd monte_carlo_mixture_mean(const Eigen::VectorXd& w, const Eigen::VectorXd& u,
                                         const MixoutConfig& config, std::int64_t samples,
                                         std::uint64_t seed);

}  // namespace auglang::mixoutlab
