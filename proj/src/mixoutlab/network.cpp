#include "auglang/mixoutlab/network.hpp"

#include <cmath>
#include <random>
#include <string>

#include "auglang/error.hpp"

namespace auglang::mixoutlab {
namespace {

void check_input(const DifferentiableModel& m, const Eigen::VectorXd& theta,
                 const Eigen::VectorXd& x) {
  if (theta.size() != m.num_params() || x.size() != m.in_dim()) {
    throw Error("dimension_mismatch", "parameter or input dimension does not match the model");
  }
}

}  // namespace

LinearModel::LinearModel(Eigen::Index dim) : anchor_(Eigen::VectorXd::Zero(dim)) {}

double LinearModel::value(const Eigen::VectorXd& theta, const Eigen::VectorXd& x) const {
  check_input(*this, theta, x);
  return theta.dot(x);
}

Eigen::VectorXd LinearModel::gradient(const Eigen::VectorXd& theta, const Eigen::VectorXd& x) const {
  check_input(*this, theta, x);
  return x;
}

ZeroInitHead::ZeroInitHead(Eigen::Index width, Eigen::Index in_dim, Eigen::Index out_dim,
                           std::uint64_t seed, Eigen::Index output)
    : width_(width), in_dim_(in_dim), out_dim_(out_dim), output_(output) {
  if (width < 1 || in_dim < 1 || out_dim < 1 || output < 0 || output >= out_dim) {
    throw Error("invalid_argument", "network sizes must be positive and output < out_dim");
  }
  const Eigen::Index per_copy = out_dim * width + width * in_dim + width;
  anchor_.resize(2 * per_copy);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::Index k = 0;
  for (; k < out_dim * width + width * in_dim; ++k) anchor_(k) = g(rng);
  for (; k < per_copy; ++k) anchor_(k) = 0.1 * g(rng);
  anchor_.tail(per_copy) = anchor_.head(per_copy);
}

double ZeroInitHead::copy_value(const double* p, const Eigen::VectorXd& x) const {
  const double* a = p + output_ * width_;
  const double* b = p + out_dim_ * width_;
  const double* c = b + width_ * in_dim_;
  double s = 0;
  for (Eigen::Index j = 0; j < width_; ++j) {
    double pre = c[j];
    for (Eigen::Index i = 0; i < in_dim_; ++i) pre += b[j * in_dim_ + i] * x(i);
    if (pre > 0) s += a[j] * pre;
  }
  return s / std::sqrt(static_cast<double>(width_));
}

void ZeroInitHead::copy_gradient(const double* p, const Eigen::VectorXd& x, double* out) const {
  const double scale = 1.0 / std::sqrt(static_cast<double>(width_));
  const double* a = p + output_ * width_;
  const double* b = p + out_dim_ * width_;
  const double* c = b + width_ * in_dim_;
  double* ga = out + output_ * width_;
  double* gb = out + out_dim_ * width_;
  double* gc = gb + width_ * in_dim_;
  for (Eigen::Index j = 0; j < width_; ++j) {
    double pre = c[j];
    for (Eigen::Index i = 0; i < in_dim_; ++i) pre += b[j * in_dim_ + i] * x(i);
    if (pre <= 0) continue;
    ga[j] = pre * scale;
    for (Eigen::Index i = 0; i < in_dim_; ++i) gb[j * in_dim_ + i] = a[j] * x(i) * scale;
    gc[j] = a[j] * scale;
  }
}

double ZeroInitHead::value(const Eigen::VectorXd& theta, const Eigen::VectorXd& x) const {
  check_input(*this, theta, x);
  return copy_value(theta.data(), x) - copy_value(theta.data() + copy_size(), x);
}

Eigen::VectorXd ZeroInitHead::gradient(const Eigen::VectorXd& theta, const Eigen::VectorXd& x) const {
  check_input(*this, theta, x);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(theta.size());
  copy_gradient(theta.data(), x, g.data());
  copy_gradient(theta.data() + copy_size(), x, g.data() + copy_size());
  g.tail(copy_size()) *= -1.0;
  return g;
}

Eigen::MatrixXd ntk_features(const DifferentiableModel& model, const Eigen::MatrixXd& inputs) {
  Eigen::MatrixXd f(inputs.rows(), model.num_params());
  for (Eigen::Index i = 0; i < inputs.rows(); ++i) {
    f.row(i) = model.gradient(model.anchor(), inputs.row(i).transpose()).transpose();
  }
  if (!f.allFinite()) throw Error("non_finite", "non-finite gradient at the anchor");
  return f;
}

Eigen::VectorXd finite_difference_gradient(const DifferentiableModel& model,
                                           const Eigen::VectorXd& theta, const Eigen::VectorXd& x,
                                           double h) {
  Eigen::VectorXd g(theta.size());
  Eigen::VectorXd t = theta;
  for (Eigen::Index k = 0; k < theta.size(); ++k) {
    t(k) = theta(k) + h;
    const double up = model.value(t, x);
    t(k) = theta(k) - h;
    const double down = model.value(t, x);
    t(k) = theta(k);
    g(k) = (up - down) / (2 * h);
  }
  return g;
}

}  // namespace auglang::mixoutlab
