#include "sparse_ridge/heuristic.hpp"

#include "sparse_ridge/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sridge {

namespace {

double soft_threshold(double c, double t) {
  if (c > t) return c - t;
  if (c < -t) return c + t;
  return 0.0;
}

Support all_features(Index p) {
  Support s(static_cast<std::size_t>(p));
  std::iota(s.begin(), s.end(), Index{0});
  return s;
}

}  // namespace

Vector elastic_net_cd(const ProblemSpec& spec, double gamma, double tol, const std::optional<Vector>& warm) {
  if (!(gamma >= 0.0)) throw InvalidArgument("gamma must be nonnegative");
  const Index p = spec.p();
  const double n = static_cast<double>(spec.n());
  const Matrix& x = spec.x();
  Vector beta = warm && warm->size() == p ? *warm : Vector::Zero(p);
  Vector resid = spec.y() - x * beta;
  Vector diag(p);
  for (Index j = 0; j < p; ++j) diag(j) = x.col(j).squaredNorm() / n + spec.lambda();

  for (int sweep = 0; sweep < 1'000'000; ++sweep) {
    double max_change = 0.0;
    for (Index j = 0; j < p; ++j) {
      const double old = beta(j);
      const double c = x.col(j).dot(resid) / n + (diag(j) - spec.lambda()) * old;
      const double b = soft_threshold(c, 0.5 * gamma) / diag(j);
      if (b != old) {
        resid.noalias() -= (b - old) * x.col(j);
        beta(j) = b;
        max_change = std::max(max_change, std::abs(b - old));
      }
    }
    if (max_change <= tol) break;
  }
  return beta;
}

double ridge_minimum(const ProblemSpec& spec) { return fit_support(spec, all_features(spec.p())).objective; }

Vector min_l1_given_level(const ProblemSpec& spec, double v_upper, double gamma_tol, const std::optional<Vector>& warm) {
  const double floor_value = ridge_minimum(spec);
  if (v_upper < floor_value) {
    throw InfeasibleLevel("objective level " + std::to_string(v_upper) + " is below the ridge minimum " +
                          std::to_string(floor_value));
  }
  const Index p = spec.p();
  const double n = static_cast<double>(spec.n());
  if (v_upper >= spec.y().squaredNorm() / n) return Vector::Zero(p);

  double lo = 0.0;
  double hi = 2.0 / n * (spec.x().transpose() * spec.y()).lpNorm<Eigen::Infinity>();
  Vector best = fit_support(spec, all_features(p)).beta;
  Vector start = warm && warm->size() == p ? *warm : best;
  while (hi - lo > gamma_tol) {
    const double mid = 0.5 * (lo + hi);
    Vector beta = elastic_net_cd(spec, mid, 1e-8, start);
    if (ridge_objective(spec, beta) <= v_upper) {
      lo = mid;
      best = beta;
    } else {
      hi = mid;
    }
    start = std::move(beta);
  }
  return best;
}

Support numerical_support(const Vector& beta) {
  const double cut = 1e-8 * std::max(1.0, beta.lpNorm<Eigen::Infinity>());
  Support s;
  for (Index i = 0; i < beta.size(); ++i) {
    if (std::abs(beta(i)) > cut) s.push_back(i);
  }
  return s;
}

int bisection_iteration_bound(const ProblemSpec& spec, double delta_hat) {
  if (!(delta_hat > 0.0)) throw InvalidArgument("delta_hat must be positive");
  const double gap = spec.y().squaredNorm() / static_cast<double>(spec.n());
  if (gap <= delta_hat) return 0;
  return static_cast<int>(std::floor(std::log2(gap / delta_hat))) + 1;
}

BisectionResult heuristic_bisection(const ProblemSpec& spec, double delta_hat) {
  if (!(delta_hat > 0.0)) throw InvalidArgument("delta_hat must be positive");
  const Index p = spec.p();
  const double floor_value = ridge_minimum(spec);

  double lower = 0.0;
  double upper = spec.y().squaredNorm() / static_cast<double>(spec.n());
  Vector upper_beta = Vector::Zero(p);  // beta = 0 attains the initial upper level
  std::optional<Vector> warm;
  BisectionResult result;
  int iter = 0;
  while (upper - lower > delta_hat) {
    BisectionStep step;
    step.iter = ++iter;
    step.lower = lower;
    step.upper = upper;
    step.q = 0.5 * (lower + upper);
    if (step.q < floor_value) {
      step.branch = "infeasible";
      lower = step.q;
    } else {
      Vector beta = min_l1_given_level(spec, step.q, 1e-10, warm);
      step.l1 = beta.lpNorm<1>();
      step.zeros = p - static_cast<Index>(numerical_support(beta).size());
      if (step.zeros >= p - spec.k()) {
        step.branch = "upper";
        upper = step.q;
        upper_beta = beta;
      } else {
        step.branch = "lower";
        lower = step.q;
      }
      warm = std::move(beta);
    }
    result.trace.push_back(std::move(step));
  }
  result.final_lower = lower;
  result.final_upper = upper;
  result.estimator = restricted_estimator(spec, numerical_support(upper_beta));
  result.value = std::min(upper, result.estimator.objective);
  return result;
}

}  // namespace sridge
