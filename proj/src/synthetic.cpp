#include "sparse_ridge/synthetic.hpp"

#include "sparse_ridge/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sridge {

double PortableSampler::uniform() {
  return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
}

double PortableSampler::uniform(double lo, double hi) { return lo + (hi - lo) * (1.0 - uniform()); }

double PortableSampler::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform()));
  const double angle = 2.0 * std::numbers::pi * uniform();
  spare_ = r * std::sin(angle);
  has_spare_ = true;
  return r * std::cos(angle);
}

SyntheticData generate_synthetic(const SyntheticConfig& c) {
  if (c.n < 1 || c.p < 1) throw InvalidArgument("n and p must be positive");
  if (c.k_true < 0 || c.k_true > c.p) throw InvalidArgument("k_true must lie in [0, p]");
  if (!(std::abs(c.rho) < 1.0)) throw InvalidArgument("rho must lie in (-1, 1)");
  if (!(c.snr > 0.0)) throw InvalidArgument("snr must be positive");
  if (!(c.coef_low < c.coef_high)) throw InvalidArgument("coefficient range is empty");
  if (c.resample_small && c.coef_low >= -0.1 && c.coef_high <= 0.1) {
    throw InvalidArgument("coefficient range lies inside (-0.1, 0.1); disable resampling of small coefficients");
  }

  PortableSampler rng(c.seed);
  Vector beta = Vector::Zero(c.p);
  for (Index j = 0; j < c.k_true; ++j) {
    double b = rng.uniform(c.coef_low, c.coef_high);
    while (c.resample_small && std::abs(b) < 0.1) b = rng.uniform(c.coef_low, c.coef_high);
    beta(j) = b;
  }

  // Row-wise AR(1) recursion gives exactly the covariance rho^|i-j|.
  const double innov = std::sqrt(1.0 - c.rho * c.rho);
  Matrix x(c.n, c.p);
  for (Index i = 0; i < c.n; ++i) {
    double prev = rng.normal();
    x(i, 0) = prev;
    for (Index j = 1; j < c.p; ++j) {
      prev = c.rho * prev + innov * rng.normal();
      x(i, j) = prev;
    }
  }

  double signal_var = 0.0;
  for (Index i = 0; i < c.k_true; ++i) {
    for (Index j = 0; j < c.k_true; ++j) {
      signal_var += beta(i) * beta(j) * std::pow(c.rho, static_cast<double>(std::abs(i - j)));
    }
  }
  const double sigma_sq = signal_var / c.snr;
  const double sigma = std::sqrt(sigma_sq);
  Vector y = x * beta;
  for (Index i = 0; i < c.n; ++i) y(i) += sigma * rng.normal();

  Support truth;
  for (Index j = 0; j < c.k_true; ++j) truth.push_back(j);
  return SyntheticData{Dataset(std::move(x), std::move(y)), std::move(beta), std::move(truth), sigma_sq};
}

double false_alarm_rate(const Support& estimated, const Support& truth, Index k) {
  if (k < 1) throw InvalidArgument("k must be positive");
  Support e = estimated;
  Support t = truth;
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  std::sort(t.begin(), t.end());
  Index wrong = 0;
  for (Index i : e) {
    if (!std::binary_search(t.begin(), t.end(), i)) ++wrong;
  }
  return 100.0 * static_cast<double>(wrong) / static_cast<double>(k);
}

}  // namespace sridge
