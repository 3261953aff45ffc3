#include "sparse_ridge/model.hpp"

#include "sparse_ridge/combinations.hpp"
#include "sparse_ridge/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace sridge {

Support normalize_support(Support s, Index p) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  if (!s.empty() && (s.front() < 0 || s.back() >= p)) {
    throw InvalidArgument("support index out of range [0, " + std::to_string(p) + ")");
  }
  return s;
}

Dataset::Dataset(Matrix x, Vector y, std::vector<std::string> feature_names)
    : x_(std::move(x)), y_(std::move(y)), names_(std::move(feature_names)) {
  if (x_.rows() < 1 || x_.cols() < 1) throw InvalidArgument("design matrix must be at least 1x1");
  if (y_.size() != x_.rows()) {
    std::ostringstream os;
    os << "response length " << y_.size() << " does not match " << x_.rows() << " rows";
    throw InvalidArgument(os.str());
  }
  if (!x_.allFinite() || !y_.allFinite()) throw InvalidArgument("non-finite entry in X or y");
  if (!names_.empty() && static_cast<Index>(names_.size()) != x_.cols()) {
    throw InvalidArgument("feature name count does not match column count");
  }
}

Dataset Dataset::normalized() const {
  Matrix x = x_;
  const double n = static_cast<double>(x.rows());
  for (Index j = 0; j < x.cols(); ++j) {
    const double norm = x.col(j).norm();
    if (norm > 0.0) x.col(j) *= std::sqrt(n) / norm;
  }
  return Dataset(std::move(x), y_, names_);
}

ProblemSpec::ProblemSpec(std::shared_ptr<const Dataset> data, double lambda, Index k)
    : data_(std::move(data)), lambda_(lambda), k_(k) {
  if (!data_) throw InvalidArgument("problem has no dataset");
  if (!(lambda_ > 0.0) || !std::isfinite(lambda_)) throw InvalidArgument("lambda must be positive");
  if (k_ < 1 || k_ > std::min(data_->n(), data_->p())) {
    throw InvalidArgument("k must satisfy 1 <= k <= min(n, p)");
  }
}

ProblemSpec::ProblemSpec(Dataset data, double lambda, Index k)
    : ProblemSpec(std::make_shared<const Dataset>(std::move(data)), lambda, k) {}

double ridge_objective(const ProblemSpec& spec, const Vector& beta) {
  if (beta.size() != spec.p()) throw InvalidArgument("coefficient vector has wrong length");
  if (!beta.allFinite()) throw InvalidArgument("coefficient vector is not finite");
  const Vector r = spec.y() - spec.x() * beta;
  return r.squaredNorm() / static_cast<double>(spec.n()) + spec.lambda() * beta.squaredNorm();
}

namespace {

Matrix columns(const Matrix& x, const Support& s) {
  Matrix out(x.rows(), static_cast<Index>(s.size()));
  for (std::size_t j = 0; j < s.size(); ++j) out.col(static_cast<Index>(j)) = x.col(s[j]);
  return out;
}

// beta_S of the closed-form restricted fit, in support order.
Vector solve_restricted(const ProblemSpec& spec, const Support& s) {
  const Matrix xs = columns(spec.x(), s);
  Matrix a = xs.transpose() * xs;
  a.diagonal().array() += spec.n_lambda();
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success) throw NumericalFailure("restricted ridge system is not positive definite");
  return llt.solve(xs.transpose() * spec.y());
}

}  // namespace

SparseEstimator fit_support(const ProblemSpec& spec, Support s) {
  s = normalize_support(std::move(s), spec.p());
  SparseEstimator est;
  est.beta = Vector::Zero(spec.p());
  if (!s.empty()) {
    const Vector bs = solve_restricted(spec, s);
    for (std::size_t j = 0; j < s.size(); ++j) est.beta(s[j]) = bs(static_cast<Index>(j));
  }
  est.support = std::move(s);
  est.objective = ridge_objective(spec, est.beta);
  return est;
}

SparseEstimator restricted_estimator(const ProblemSpec& spec, Support s) {
  s = normalize_support(std::move(s), spec.p());
  if (static_cast<Index>(s.size()) > spec.k()) {
    throw BudgetExceeded("support of size " + std::to_string(s.size()) + " exceeds budget k = " +
                         std::to_string(spec.k()));
  }
  return fit_support(spec, std::move(s));
}

double mic_value(const ProblemSpec& spec, const Support& support, MicRoute route) {
  const Support s = normalize_support(support, spec.p());
  const double n = static_cast<double>(spec.n());
  if (s.empty()) return spec.y().squaredNorm() / n;
  if (route == MicRoute::automatic) {
    route = static_cast<Index>(s.size()) <= spec.n() ? MicRoute::ridge_system : MicRoute::gram_system;
  }
  if (route == MicRoute::ridge_system) {
    // Woodbury: f = (1/n)(||y||^2 - y^T X_S beta_S).
    const Vector bs = solve_restricted(spec, s);
    double fit = 0.0;
    for (std::size_t j = 0; j < s.size(); ++j) {
      fit += spec.x().col(s[j]).dot(spec.y()) * bs(static_cast<Index>(j));
    }
    return (spec.y().squaredNorm() - fit) / n;
  }
  Matrix a = Matrix::Zero(spec.n(), spec.n());
  for (Index i : s) a.selfadjointView<Eigen::Lower>().rankUpdate(spec.x().col(i));
  a.diagonal().array() += spec.n_lambda();
  Eigen::LLT<Matrix> llt(a);  // reads the lower triangle only
  if (llt.info() != Eigen::Success) throw NumericalFailure("n x n system is not positive definite");
  return spec.lambda() * spec.y().dot(llt.solve(spec.y()));
}

double mic_value(const ProblemSpec& spec, const Vector& z) {
  if (z.size() != spec.p()) throw InvalidArgument("selection vector has wrong length");
  Support s;
  for (Index i = 0; i < z.size(); ++i) {
    if (z(i) == 1.0) {
      s.push_back(i);
    } else if (z(i) != 0.0) {
      throw InvalidArgument("selection vector must be binary");
    }
  }
  return mic_value(spec, s);
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  std::uint64_t c = 1;
  for (std::uint64_t i = 1; i <= r; ++i) {
    const std::uint64_t num = n - r + i;
    // c * num / i stays integral; guard the multiplication.
    if (c > std::numeric_limits<std::uint64_t>::max() / num) return std::numeric_limits<std::uint64_t>::max();
    c = c * num / i;
  }
  return c;
}

namespace {

void check_cap(std::uint64_t count, const SpectralOptions& opts, const char* what) {
  if (count > opts.enumeration_cap) {
    std::ostringstream os;
    os << what << " requires enumerating " << count << " subsets, above the cap of "
       << opts.enumeration_cap << "; use upper_bound mode or raise the cap";
    throw CapExceeded(os.str());
  }
}

}  // namespace

double theta(const ProblemSpec& spec, Index s, SpectralMode mode, SpectralOptions opts) {
  const Index p = spec.p();
  if (s == 0) return 0.0;
  if (s < 0 || s > p) throw InvalidArgument("theta requires 0 <= s <= p");
  const Matrix& x = spec.x();
  if (mode == SpectralMode::upper_bound) {
    Vector norms = x.colwise().squaredNorm().transpose();
    std::sort(norms.data(), norms.data() + norms.size(), std::greater<>());
    return norms.head(s).sum();
  }
  check_cap(binomial(static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(s)), opts, "exact theta");
  const Matrix gram = x.transpose() * x;
  double best = 0.0;
  Matrix sub(s, s);
  Eigen::SelfAdjointEigenSolver<Matrix> eig;
  for_each_combination(p, s, [&](const std::vector<Index>& idx) {
    for (Index a = 0; a < s; ++a) {
      for (Index b = 0; b < s; ++b) sub(a, b) = gram(idx[a], idx[b]);
    }
    eig.compute(sub, Eigen::EigenvaluesOnly);
    best = std::max(best, eig.eigenvalues()(s - 1));
    return true;
  });
  return best;
}

double underline_theta(const ProblemSpec& spec, SpectralOptions opts) {
  const Index p = spec.p();
  const Index n = spec.n();
  const Index smallest = p - spec.k() + 1;
  // X_T X_T^T has rank <= |T|, so any |T| < n already attains zero.
  if (smallest < n) return 0.0;
  std::uint64_t count = 0;
  for (Index m = smallest; m <= p; ++m) {
    count += binomial(static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(m));
  }
  check_cap(count, opts, "underline theta");
  const Matrix& x = spec.x();
  double best = std::numeric_limits<double>::infinity();
  Matrix a(n, n);
  Eigen::SelfAdjointEigenSolver<Matrix> eig;
  for (Index m = smallest; m <= p; ++m) {
    for_each_combination(p, m, [&](const std::vector<Index>& idx) {
      a.setZero();
      for (Index i : idx) a.selfadjointView<Eigen::Lower>().rankUpdate(x.col(i));
      eig.compute(a, Eigen::EigenvaluesOnly);
      best = std::min(best, std::max(0.0, eig.eigenvalues()(0)));
      return true;
    });
  }
  return best;
}

SpectralStats spectral_stats(const ProblemSpec& spec, SpectralMode mode, std::optional<Index> max_s,
                             SpectralOptions opts) {
  const Index top = max_s.value_or(spec.k());
  SpectralStats stats;
  stats.mode = mode;
  stats.theta.resize(static_cast<std::size_t>(top + 1), 0.0);
  for (Index s = 1; s <= top; ++s) stats.theta[static_cast<std::size_t>(s)] = theta(spec, s, mode, opts);
  stats.underline_theta = mode == SpectralMode::exact ? underline_theta(spec, opts) : 0.0;
  return stats;
}

}  // namespace sridge
