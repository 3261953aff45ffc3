#pragma once

// Problem data, the penalized least-squares objective, the closed-form
// restricted estimator, the projected subset objective f(z) and the spectral
// constants that appear in the greedy guarantee.

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace sridge {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Sorted, duplicate-free list of feature indices (0-based).
using Support = std::vector<Index>;

/// Sorts and deduplicates; throws InvalidArgument for indices outside [0, p).
Support normalize_support(Support s, Index p);

class Dataset {
 public:
  /// Throws InvalidArgument on empty shapes, mismatched lengths, non-finite
  /// entries or a names list whose length is neither 0 nor p.
  Dataset(Matrix x, Vector y, std::vector<std::string> feature_names = {});

  const Matrix& x() const { return x_; }
  const Vector& y() const { return y_; }
  const std::vector<std::string>& feature_names() const { return names_; }
  Index n() const { return x_.rows(); }
  Index p() const { return x_.cols(); }

  /// Copy with every nonzero column rescaled to squared norm n.
  Dataset normalized() const;

 private:
  Matrix x_;
  Vector y_;
  std::vector<std::string> names_;
};

/// A dataset with its ridge parameter and sparsity budget. The dataset is
/// shared immutably, so copies are cheap and safe across threads.
class ProblemSpec {
 public:
  ProblemSpec(std::shared_ptr<const Dataset> data, double lambda, Index k);
  ProblemSpec(Dataset data, double lambda, Index k);

  const Dataset& data() const { return *data_; }
  const std::shared_ptr<const Dataset>& data_ptr() const { return data_; }
  const Matrix& x() const { return data_->x(); }
  const Vector& y() const { return data_->y(); }
  double lambda() const { return lambda_; }
  Index k() const { return k_; }
  Index n() const { return data_->n(); }
  Index p() const { return data_->p(); }
  double n_lambda() const { return static_cast<double>(n()) * lambda_; }

  ProblemSpec with_lambda(double lambda) const { return {data_, lambda, k_}; }
  ProblemSpec with_k(Index k) const { return {data_, lambda_, k}; }

 private:
  std::shared_ptr<const Dataset> data_;
  double lambda_;
  Index k_;
};

struct SparseEstimator {
  Support support;
  Vector beta;
  double objective = 0.0;
};

/// (1/n)||y - X beta||^2 + lambda ||beta||^2. Cardinality is not checked.
double ridge_objective(const ProblemSpec& spec, const Vector& beta);

/// Ridge fit restricted to S: beta_S = (X_S^T X_S + n lambda I)^{-1} X_S^T y,
/// zero elsewhere. Throws BudgetExceeded when |S| > k.
SparseEstimator restricted_estimator(const ProblemSpec& spec, Support s);

/// Same closed form without the budget check (used for diagnostics and for
/// repairing over-full randomized supports).
SparseEstimator fit_support(const ProblemSpec& spec, Support s);

enum class MicRoute {
  automatic,     // ridge system when |S| <= n, otherwise the n x n system
  ridge_system,  // |S| x |S| Cholesky of X_S^T X_S + n lambda I
  gram_system,   // n x n Cholesky of n lambda I + X_S X_S^T
};

/// f(S) = lambda y^T (n lambda I + sum_{i in S} x_i x_i^T)^{-1} y.
/// Any subset is accepted; the budget is not enforced here.
double mic_value(const ProblemSpec& spec, const Support& s, MicRoute route = MicRoute::automatic);

/// Binary-vector overload; throws InvalidArgument for entries other than 0/1.
double mic_value(const ProblemSpec& spec, const Vector& z);

enum class SpectralMode { exact, upper_bound };

struct SpectralOptions {
  std::uint64_t enumeration_cap = 1'000'000;
};

/// theta_s = max over |S| = s of sigma_max(X_S X_S^T). upper_bound mode
/// returns the sum of the s largest squared column norms instead.
double theta(const ProblemSpec& spec, Index s, SpectralMode mode, SpectralOptions opts = {});

/// min over |T| >= p - k + 1 of sigma_min(X_T X_T^T), by enumeration.
double underline_theta(const ProblemSpec& spec, SpectralOptions opts = {});

struct SpectralStats {
  std::vector<double> theta;  // theta[s] for s = 0..max_s, theta[0] = 0
  double underline_theta = 0.0;
  SpectralMode mode = SpectralMode::exact;

  double at(Index s) const { return theta.at(static_cast<std::size_t>(s)); }
};

/// theta_0..theta_{max_s} plus underline-theta. In upper_bound mode the
/// underline value is reported as 0, which only loosens derived bounds.
SpectralStats spectral_stats(const ProblemSpec& spec, SpectralMode mode,
                             std::optional<Index> max_s = std::nullopt,
                             SpectralOptions opts = {});

/// C(n, r), saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t r);

}  // namespace sridge
