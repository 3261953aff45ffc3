#pragma once

// Bisection on the objective level: for a trial level q, find the minimum-L1
// coefficient vector whose ridge objective stays below q, and move the upper
// end of the bracket whenever that vector is already k-sparse.

#include "sparse_ridge/model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sridge {

/// Minimizes (1/n)||y - X beta||^2 + lambda ||beta||^2 + gamma ||beta||_1 by
/// cyclic coordinate descent, stopping when no coordinate moves by more than
/// tol in a full sweep.
Vector elastic_net_cd(const ProblemSpec& spec, double gamma, double tol = 1e-8,
                      const std::optional<Vector>& warm = std::nullopt);

/// Ridge objective minimum over all of R^p.
double ridge_minimum(const ProblemSpec& spec);

/// Minimum-L1 vector with ridge objective <= v_upper, found by bisecting the
/// elastic-net penalty on [0, (2/n)||X^T y||_inf] down to width gamma_tol.
/// Throws InfeasibleLevel when v_upper is below the ridge minimum.
Vector min_l1_given_level(const ProblemSpec& spec, double v_upper, double gamma_tol = 1e-10,
                          const std::optional<Vector>& warm = std::nullopt);

/// |beta_i| <= 1e-8 max(1, ||beta||_inf) counts as zero.
Support numerical_support(const Vector& beta);

struct BisectionStep {
  int iter = 0;
  double lower = 0.0;  // bracket before the step
  double upper = 0.0;
  double q = 0.0;
  std::optional<double> l1;  // absent when q is below the ridge minimum
  Index zeros = 0;
  std::string branch;  // "upper", "lower" or "infeasible"
};

struct BisectionResult {
  SparseEstimator estimator;  // ridge refit on the final support
  std::vector<BisectionStep> trace;
  double value = 0.0;  // min(U, refit objective)
  double final_lower = 0.0;
  double final_upper = 0.0;
};

/// Stops once U - L <= delta_hat, which takes at most
/// floor(log2(||y||^2 / (n delta_hat))) + 1 halvings.
BisectionResult heuristic_bisection(const ProblemSpec& spec, double delta_hat);

/// The iteration bound above.
int bisection_iteration_bound(const ProblemSpec& spec, double delta_hat);

}  // namespace sridge
