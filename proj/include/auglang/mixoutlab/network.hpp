#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace auglang::mixoutlab {

/// Scalar-output model f(x; theta) with an exact gradient in theta.
class DifferentiableModel {
 public:
  virtual ~DifferentiableModel() = default;
  virtual Eigen::Index num_params() const = 0;
  virtual Eigen::Index in_dim() const = 0;
  /// Parameters u at which the model is linearized.
  virtual const Eigen::VectorXd& anchor() const = 0;
  virtual double value(const Eigen::VectorXd& theta, const Eigen::VectorXd& x) const = 0;
  virtual Eigen::VectorXd gradient(const Eigen::VectorXd& theta, const Eigen::VectorXd& x) const = 0;
};

/// f(x; theta) = theta^T x, anchored at theta = 0.
class LinearModel final : public DifferentiableModel {
 public:
  explicit LinearModel(Eigen::Index dim);
  Eigen::Index num_params() const override { return anchor_.size(); }
  Eigen::Index in_dim() const override { return anchor_.size(); }
  const Eigen::VectorXd& anchor() const override { return anchor_; }
  double value(const Eigen::VectorXd& theta, const Eigen::VectorXd& x) const override;
  Eigen::VectorXd gradient(const Eigen::VectorXd& theta, const Eigen::VectorXd& x) const override;

 private:
  Eigen::VectorXd anchor_;
};

/// Difference of two copies of a two-layer ReLU network in NTK scaling,
///   g(x) = W^{-1/2} sum_j a_kj relu(b_j . x + c_j),
/// f(x; theta) = g_k(x; theta_A) - g_k(x; theta_B). Both copies start from the
/// same draw, so f(x; u) is exactly 0 while the gradient is [grad g, -grad g].
/// Per-copy parameter layout: a (out x width, row-major), b (width x in, row-major), c (width).
class ZeroInitHead final : public DifferentiableModel {
 public:
  ZeroInitHead(Eigen::Index width, Eigen::Index in_dim, Eigen::Index out_dim, std::uint64_t seed,
               Eigen::Index output = 0);

  Eigen::Index num_params() const override { return anchor_.size(); }
  Eigen::Index in_dim() const override { return in_dim_; }
  Eigen::Index width() const { return width_; }
  Eigen::Index out_dim() const { return out_dim_; }
  const Eigen::VectorXd& anchor() const override { return anchor_; }
  double value(const Eigen::VectorXd& theta, const Eigen::VectorXd& x) const override;
  Eigen::VectorXd gradient(const Eigen::VectorXd& theta, const Eigen::VectorXd& x) const override;

 private:
  Eigen::Index copy_size() const { return anchor_.size() / 2; }
  double copy_value(const double* p, const Eigen::VectorXd& x) const;
  void copy_gradient(const double* p, const Eigen::VectorXd& x, double* out) const;

  Eigen::Index width_, in_dim_, out_dim_, output_;
  Eigen::VectorXd anchor_;
};

/// Row i is the gradient of f at the anchor for input row i of `inputs`.
/// Throws "non_finite" if any entry is not finite.
Eigen::MatrixXd ntk_features(const DifferentiableModel& model, const Eigen::MatrixXd& inputs);

/// Central differences of f in every parameter, with step h.
Eigen::VectorXd finite_difference_gradient(const DifferentiableModel& model,
                                           const Eigen::VectorXd& theta, const Eigen::VectorXd& x,
                                           double h = 1e-6);

}  // namespace auglang::mixoutlab
