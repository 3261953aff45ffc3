#pragma once

// Synthetic regression data with AR(1)-correlated Gaussian features and a
// planted sparse coefficient vector, plus the selection-error metric.

#include "sparse_ridge/model.hpp"

#include <cstdint>
#include <random>

namespace sridge {

struct SyntheticConfig {
  Index n = 100;
  Index p = 20;
  Index k_true = 5;
  double rho = 0.5;  // corr(x_i, x_j) = rho^|i - j|
  double snr = 9.0;  // var(x^T beta) / var(noise)
  double coef_low = -3.0;
  double coef_high = 3.0;
  std::uint64_t seed = 0;
  // Redraw planted coefficients with |beta| < 0.1 so that every planted
  // feature carries a visible signal.
  bool resample_small = true;
};

struct SyntheticData {
  Dataset dataset;
  Vector true_beta;
  Support true_support;
  double sigma_sq = 0.0;
};

/// Portable sampler: mt19937_64 bits mapped to uniforms and Box-Muller
/// normals by hand, since std:: distributions differ across libraries.
class PortableSampler {
 public:
  explicit PortableSampler(std::uint64_t seed) : engine_(seed) {}
  double uniform();  // (0, 1]
  double uniform(double lo, double hi);
  double normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Deterministic in the config. Throws InvalidArgument on an invalid config.
SyntheticData generate_synthetic(const SyntheticConfig& config);

/// 100 |estimated \ truth| / k.
double false_alarm_rate(const Support& estimated, const Support& truth, Index k);

}  // namespace sridge
