#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "auglang/mixoutlab/kernel.hpp"
#include "auglang/mixoutlab/mixout.hpp"

namespace auglang::mixoutlab {

struct VerifyOptions {
  MixoutConfig mixout;
  std::uint64_t seed = 7;
  // Quadratic-equality sweep.
  int equality_configs = 100;
  Eigen::Index equality_dim = 50;
  std::int64_t mc_samples = 1'000'000;
  // Kernel-regression equivalence.
  Eigen::Index width = 4096;
  Eigen::Index in_dim = 3;
  Eigen::Index n_train = 20;
  Eigen::Index n_test = 50;
  std::int64_t sgd_steps = 10000;
  TestTimeParams test_time = TestTimeParams::kRaw;
  // Gradient check.
  Eigen::Index fd_width = 512;
  int fd_inputs = 20;
  // Noise probe.
  double noise_rate = 0.3;
  Eigen::Index noise_width = 512;
  Eigen::Index noise_train = 100;
  Eigen::Index noise_test = 200;
  std::vector<double> lambda2_grid = {1e-10, 1e-3, 1e-2, 1e-1, 1.0, 10.0};
};

struct CheckResult {
  std::string name;
  double measured = 0;
  double tolerance = 0;
  bool passed = false;
  std::string detail;
};

struct VerificationReport {
  std::vector<CheckResult> checks;

  bool all_passed() const;
  nlohmann::ordered_json to_json() const;
};

// Individual check groups; each appends its results.
void verify_mixture(const VerifyOptions& o, VerificationReport& r);
void verify_expected_loss(const VerifyOptions& o, VerificationReport& r);
void verify_ntk_gradients(const VerifyOptions& o, VerificationReport& r);
void verify_kernel_ridge(const VerifyOptions& o, VerificationReport& r);
void verify_noise_probe(const VerifyOptions& o, VerificationReport& r);

/// All groups above, in that order.
VerificationReport run_verification(const VerifyOptions& options);

}  // namespace auglang::mixoutlab
