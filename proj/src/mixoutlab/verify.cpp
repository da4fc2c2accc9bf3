#include "auglang/mixoutlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "auglang/mixoutlab/network.hpp"

namespace auglang::mixoutlab {
namespace {

Eigen::VectorXd gaussian(std::mt19937_64& rng, Eigen::Index d) {
  std::normal_distribution<double> g;
  Eigen::VectorXd v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = g(rng);
  return v;
}

void add(VerificationReport& r, std::string name, double measured, double tol,
         std::string detail = {}) {
  // Measured values are deviations; NaN never passes.
  r.checks.push_back({std::move(name), measured, tol, measured <= tol, std::move(detail)});
}

double rmse(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return std::sqrt((a - b).squaredNorm() / static_cast<double>(a.size()));
}

}  // namespace

bool VerificationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

nlohmann::ordered_json VerificationReport::to_json() const {
  nlohmann::ordered_json out;
  out["passed"] = all_passed();
  out["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    nlohmann::ordered_json j;
    j["name"] = c.name;
    j["measured"] = c.measured;
    j["tolerance"] = c.tolerance;
    j["passed"] = c.passed;
    if (!c.detail.empty()) j["detail"] = c.detail;
    out["checks"].push_back(std::move(j));
  }
  return out;
}

void verify_mixture(const VerifyOptions& o, VerificationReport& r) {
  std::mt19937_64 rng(o.seed);
  const double mu = o.mixout.mu();
  const Eigen::Index d = 8;
  double worst = 0;
  std::bernoulli_distribution keep(mu);
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::VectorXd w = gaussian(rng, d), u = gaussian(rng, d);
    Eigen::VectorXd mask(d);
    for (Eigen::Index i = 0; i < d; ++i) mask(i) = keep(rng) ? 1.0 : 0.0;
    const Eigen::VectorXd phi = apply_mixout(w, u, mask, mu);
    const Eigen::VectorXd expect = mask.cwiseProduct(w - u) / mu;
    worst = std::max(worst, ((phi - u) - expect).cwiseAbs().maxCoeff());
  }
  add(r, "mixture_identity", worst, 1e-12, "max |(Phi - u) - M (w - u) / mu| over 1000 masks");

  const Eigen::Index dm = 3;
  const Eigen::VectorXd w = gaussian(rng, dm), u = gaussian(rng, dm);
  const Eigen::VectorXd mean = monte_carlo_mixture_mean(w, u, o.mixout, o.mc_samples, o.seed + 1);
  double z = 0;
  for (Eigen::Index i = 0; i < dm; ++i) {
    const double se = std::sqrt(o.mixout.sigma2()) * std::abs(w(i) - u(i)) / mu /
                      std::sqrt(static_cast<double>(o.mc_samples));
    z = std::max(z, std::abs(mean(i) - w(i)) / se);
  }
  add(r, "mixture_mean_monte_carlo", z, 3.0, "max standard errors between sample mean of Phi and w");
}

void verify_expected_loss(const VerifyOptions& o, VerificationReport& r) {
  std::mt19937_64 rng(o.seed + 2);
  std::uniform_real_distribution<double> p_dist(0.01, 0.5), m_dist(0.1, 2.0);
  double worst_gap = 0, worst_violation = -INFINITY;
  for (int c = 0; c < o.equality_configs; ++c) {
    MixoutConfig cfg{p_dist(rng), m_dist(rng)};
    const Eigen::VectorXd w = gaussian(rng, o.equality_dim);
    const Eigen::VectorXd u = gaussian(rng, o.equality_dim);
    const Eigen::VectorXd t = gaussian(rng, o.equality_dim);
    worst_gap = std::max(worst_gap, expected_loss_quadratic(w, u, t, cfg).gap);
    const auto sep = expected_loss_separable(w, u, logcosh_loss(t, cfg.m), cfg);
    worst_violation = std::max(worst_violation, sep.rhs - sep.lhs);
  }
  add(r, "quadratic_equality_gap", worst_gap, 1e-12,
      "max |E[L(Phi)] - L(w) - m sigma^2 / (2 mu^2) |w - u|^2| over random configs");
  add(r, "strongly_convex_lower_bound", worst_violation, 1e-9,
      "max (rhs - lhs) for a non-quadratic strongly convex loss");

  const MixoutConfig cfg = o.mixout;
  const Eigen::VectorXd w = gaussian(rng, o.equality_dim);
  const Eigen::VectorXd u = gaussian(rng, o.equality_dim);
  const Eigen::VectorXd t = gaussian(rng, o.equality_dim);
  const auto exact = expected_loss_quadratic(w, u, t, cfg);
  const auto mc = monte_carlo_loss(w, u, quadratic_loss(t, cfg.m), cfg, o.mc_samples, o.seed + 3);
  add(r, "expected_loss_monte_carlo", std::abs(mc.mean - exact.lhs) / mc.std_error, 3.0,
      "standard errors between the sampled and closed-form expected loss");
}

void verify_ntk_gradients(const VerifyOptions& o, VerificationReport& r) {
  const ZeroInitHead head(o.fd_width, o.in_dim, 1, o.seed + 4);
  std::mt19937_64 rng(o.seed + 5);
  double worst_rel = 0, worst_out = 0;
  for (int i = 0; i < o.fd_inputs; ++i) {
    const Eigen::VectorXd x = gaussian(rng, o.in_dim);
    const Eigen::VectorXd exact = head.gradient(head.anchor(), x);
    const Eigen::VectorXd fd = finite_difference_gradient(head, head.anchor(), x);
    worst_rel = std::max(worst_rel, (exact - fd).norm() / std::max(exact.norm(), 1e-300));
    worst_out = std::max(worst_out, std::abs(head.value(head.anchor(), x)));
  }
  add(r, "ntk_anchor_output", worst_out, 1e-12, "max |f(x; u)| of the zero-init head");
  add(r, "ntk_gradient_finite_difference", worst_rel, 1e-5,
      "max relative error of exact gradients vs central differences");
}

void verify_kernel_ridge(const VerifyOptions& o, VerificationReport& r) {
  const double l2 = o.mixout.lambda2();
  const auto p = make_ntk_problem(o.width, o.in_dim, o.n_train, o.n_test, o.seed + 6);
  const Eigen::VectorXd krr = krr_predict(p.k_test, krr_solve(p.k_train, p.y_train, l2));

  const auto gd = train_linearized_ridge(p.f_train, p.y_train, l2);
  add(r, "ridge_gd_gradient_norm", gd.grad_norm, 1e-8,
      "gradient norm of the regularized objective after " + std::to_string(gd.steps) + " steps");
  add(r, "ridge_gd_vs_krr_rmse", rmse(p.f_test * gd.delta, krr), 1e-3,
      "explicit-ridge gradient descent vs kernel ridge regression, test points");

  MixoutSgdOptions sgd;
  sgd.steps = o.sgd_steps;
  sgd.seed = o.seed + 7;
  const Eigen::VectorXd delta = train_stochastic_mixout(p.f_train, p.y_train, o.mixout, sgd);
  const Eigen::VectorXd pred = p.f_test * test_time_delta(delta, o.mixout.mu(), o.test_time);
  add(r, "stochastic_mixout_vs_krr_rmse", rmse(pred, krr), 5e-2,
      std::string("sampled-mask training vs kernel ridge regression, test parameters ") +
          (o.test_time == TestTimeParams::kRaw ? "raw" : "mask_ones"));
}

void verify_noise_probe(const VerifyOptions& o, VerificationReport& r) {
  const auto p = make_ntk_problem(o.noise_width, o.in_dim, o.noise_train, o.noise_test, o.seed + 8);
  const auto probe = noise_robustness_probe(p.k_train, p.k_test, p.y_train, p.y_test, o.noise_rate,
                                            o.lambda2_grid, o.seed + 9);
  double worst_drop = 0;
  for (std::size_t i = 1; i < probe.rows.size(); ++i) {
    worst_drop = std::max(worst_drop, probe.rows[i - 1].train_mse_noisy - probe.rows[i].train_mse_noisy);
  }
  add(r, "noise_probe_train_fit_monotone", worst_drop, 0.0,
      "largest decrease of noisy-label training MSE along the ascending grid");
  double best = INFINITY;
  for (std::size_t i = 1; i < probe.rows.size(); ++i) best = std::min(best, probe.rows[i].test_mse_clean);
  const double base = probe.rows.front().test_mse_clean;
  add(r, "noise_probe_regularization_helps", best - base, 0.0,
      "best clean-test MSE at positive ridge minus the near-zero ridge value (" +
          std::to_string(base) + ")");
}

VerificationReport run_verification(const VerifyOptions& options) {
  options.mixout.validate();
  VerificationReport r;
  verify_mixture(options, r);
  verify_expected_loss(options, r);
  verify_ntk_gradients(options, r);
  verify_kernel_ridge(options, r);
  verify_noise_probe(options, r);
  return r;
}

}  // namespace auglang::mixoutlab
