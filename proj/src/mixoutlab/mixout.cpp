#include "auglang/mixoutlab/mixout.hpp"

#include <cmath>
#include <random>
#include <string>

#include "auglang/error.hpp"
#include "mask_sampler.hpp"

namespace auglang::mixoutlab {
namespace {

void check_dims(const Eigen::VectorXd& w, const Eigen::VectorXd& u) {
  if (w.size() != u.size()) {
    throw Error("dimension_mismatch", "w and u differ in dimension: " + std::to_string(w.size()) +
                                          " vs " + std::to_string(u.size()));
  }
}

}  // namespace

void MixoutConfig::validate() const {
  if (!(p_replace > 0 && p_replace < 1)) {
    throw Error("invalid_config", "p_replace must lie in (0, 1), got " + std::to_string(p_replace));
  }
  if (!(m > 0) || !std::isfinite(m)) throw Error("invalid_config", "m must be positive");
}

Eigen::VectorXd apply_mixout(const Eigen::VectorXd& w, const Eigen::VectorXd& u,
                             const Eigen::VectorXd& mask, double mu) {
  check_dims(w, u);
  if (mask.size() != w.size()) throw Error("dimension_mismatch", "mask dimension differs");
  if (!(mu > 0 && mu <= 1)) throw Error("invalid_config", "mu must lie in (0, 1]");
  for (Eigen::Index i = 0; i < mask.size(); ++i) {
    if (mask(i) != 0.0 && mask(i) != 1.0) throw Error("invalid_mask", "mask entries must be 0 or 1");
  }
  const Eigen::ArrayXd mk = mask.array();
  return ((mk * w.array() + (1.0 - mk) * u.array() - (1.0 - mu) * u.array()) / mu).matrix();
}

double SeparableLoss::operator()(const Eigen::VectorXd& theta) const {
  double s = 0;
  for (Eigen::Index i = 0; i < theta.size(); ++i) s += term(i, theta(i));
  return s;
}

SeparableLoss quadratic_loss(Eigen::VectorXd target, double m) {
  return {[t = std::move(target), m](Eigen::Index i, double x) {
            const double r = x - t(i);
            return 0.5 * m * r * r;
          },
          m};
}

SeparableLoss logcosh_loss(Eigen::VectorXd target, double m) {
  return {[t = std::move(target), m](Eigen::Index i, double x) {
            const double r = x - t(i);
            // log cosh r = |r| + log1p(exp(-2|r|)) - log 2, stable for large |r|.
            const double a = std::abs(r);
            return 0.5 * m * r * r + a + std::log1p(std::exp(-2 * a)) - std::log(2.0);
          },
          m};
}

ExpectedLossCheck expected_loss_quadratic(const Eigen::VectorXd& w, const Eigen::VectorXd& u,
                                 const Eigen::VectorXd& target, const MixoutConfig& config) {
  config.validate();
  check_dims(w, u);
  check_dims(w, target);
  const double mu = config.mu(), s2 = config.sigma2();
  const Eigen::ArrayXd d = (w - u).array();
  const Eigen::ArrayXd e = (u - target).array();
  const double second = (e.square() + 2 * e * d + d.square() * (mu * mu + s2) / (mu * mu)).sum();
  ExpectedLossCheck c;
  c.lhs = 0.5 * config.m * second;
  c.rhs = 0.5 * config.m * (w - target).squaredNorm() +
          config.m * s2 / (2 * mu * mu) * (w - u).squaredNorm();
  c.gap = std::abs(c.lhs - c.rhs);
  return c;
}

ExpectedLossCheck expected_loss_separable(const Eigen::VectorXd& w, const Eigen::VectorXd& u,
                                 const SeparableLoss& loss, const MixoutConfig& config) {
  config.validate();
  check_dims(w, u);
  const double mu = config.mu();
  ExpectedLossCheck c;
  // Phi_i is u_i + d_i / mu with probability mu and u_i otherwise.
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    const double d = w(i) - u(i);
    c.lhs += mu * loss.term(i, u(i) + d / mu) + (1 - mu) * loss.term(i, u(i));
  }
  c.rhs = loss(w) + loss.m * config.sigma2() / (2 * mu * mu) * (w - u).squaredNorm();
  c.gap = std::abs(c.lhs - c.rhs);
  return c;
}

using detail::MaskSampler;

MonteCarloEstimate monte_carlo_loss(const Eigen::VectorXd& w, const Eigen::VectorXd& u,
                                    const SeparableLoss& loss, const MixoutConfig& config,
                                    std::int64_t samples, std::uint64_t seed) {
  config.validate();
  check_dims(w, u);
  if (samples < 2) throw Error("invalid_argument", "need at least 2 samples");
  const double mu = config.mu();
  MaskSampler sampler(mu, seed);
  Eigen::VectorXd phi(w.size());
  double mean = 0, m2 = 0;
  for (std::int64_t s = 0; s < samples; ++s) {
    sampler.fill(w.size(), [&](Eigen::Index i, bool keep) {
      phi(i) = keep ? u(i) + (w(i) - u(i)) / mu : u(i);
    });
    const double x = loss(phi);
    const double delta = x - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (x - mean);
  }
  const double var = m2 / static_cast<double>(samples - 1);
  return {mean, std::sqrt(var / static_cast<double>(samples))};
}

Eigen::VectorXd monte_carlo_mixture_mean(const Eigen::VectorXd& w, const Eigen::VectorXd& u,
                                         const MixoutConfig& config, std::int64_t samples,
                                         std::uint64_t seed) {
  config.validate();
  check_dims(w, u);
  if (samples < 1) throw Error("invalid_argument", "need at least 1 sample");
  const double mu = config.mu();
  MaskSampler sampler(mu, seed);
  Eigen::VectorXd mask(w.size());
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(w.size());
  for (std::int64_t s = 0; s < samples; ++s) {
    sampler.fill(w.size(), [&](Eigen::Index i, bool keep) { mask(i) = keep ? 1.0 : 0.0; });
    sum += apply_mixout(w, u, mask, mu);
  }
  return sum / static_cast<double>(samples);
}

}  // namespace auglang::mixoutlab
