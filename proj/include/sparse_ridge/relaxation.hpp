#pragma once

// Continuous relaxations of the cardinality-constrained ridge problem.
//
//   v1  big-M relaxation       min ridge(beta)  s.t. sum |beta_i|/M_i <= k, |beta_i| <= M_i
//   v2  perspective relaxation min (1/n)||y - X beta||^2 + lambda sum beta_i^2 / z_i
//                              s.t. z in the capped simplex
//   v3  v2 plus |beta_i| <= M_i z_i
//   v4  min f(z) over the capped simplex {z in [0,1]^p : sum z <= k}
//
// v2 and v4 coincide and both lie below v3; v1 also lies below v3. All four
// lower-bound the integer optimum.

#include "sparse_ridge/mic_model.hpp"
#include "sparse_ridge/model.hpp"

#include <optional>

namespace sridge {

struct RelaxationSolution {
  Vector z;
  double value = 0.0;
  int iterations = 0;
  double kkt_residual = 0.0;
  bool converged = false;
  std::optional<Vector> beta;
};

struct BigMVector {
  Vector m;
  double v_upper = 0.0;
  double rho = 0.0;
};

/// Euclidean projection onto {z in [0,1]^p : sum z <= k}.
Vector project_capped_simplex(const Vector& v, double k);

/// argmin sum beta_i^2 / z_i over lower_i <= z_i <= 1, sum z <= k, with the
/// convention 0/0 = 0 (z_i sits at its lower bound where beta_i = 0).
/// Throws InvalidArgument when sum(lower) > k.
Vector waterfill_z(const Vector& beta, double k, const std::optional<Vector>& lower = std::nullopt);

/// Closed-form coefficient bounds |beta*_i| <= M_i derived from an objective
/// upper bound v_upper (default ||y||^2 / n), using
/// rho = sigma_min(X^T X)/n + lambda.
BigMVector big_m(const ProblemSpec& spec, std::optional<double> v_upper = std::nullopt);

struct V4Options {
  double tol = 1e-7;  // on ||z - P(z - grad f(z))||_inf
  int max_iter = 5000;
};

/// Projected gradient (Barzilai-Borwein steps, Armijo backtracking) on f(z).
RelaxationSolution solve_v4(const ProblemSpec& spec, V4Options opts = {});

/// Same solver on an arbitrary MicModel with the given budget; used for the
/// branch-and-bound node bounds. `warm` is projected before use.
RelaxationSolution solve_mic_relaxation(const MicModel& model, double budget, V4Options opts = {},
                                        const std::optional<Vector>& warm = std::nullopt);

/// Certified lower bound f(z) + min_{z' feasible} grad^T (z' - z) at a point.
double mic_lower_bound(const MicModel& model, double budget, const Vector& z);

struct V2Options {
  double tol = 1e-9;  // on the sweep decrease and the certified gap, relative to 1 + v
  int max_iter = 100000;
};

/// Alternating minimization: weighted ridge in beta, water-filling in z.
RelaxationSolution solve_v2_perspective(const ProblemSpec& spec, V2Options opts = {});

struct V1Options {
  double tol = 1e-10;  // on the projected-gradient step, in beta units
  int max_iter = 200000;
};

RelaxationSolution solve_v1(const ProblemSpec& spec, const BigMVector& m, V1Options opts = {});

struct V3Options {
  double tol = 1e-7;
  int max_iter = 5000;
};

/// Projected gradient in z on g(z) = min_beta {perspective objective :
/// |beta_i| <= M_i z_i}; the inner box QP is solved by coordinate descent with
/// an active-set polish and the gradient comes from its multipliers.
RelaxationSolution solve_v3(const ProblemSpec& spec, const BigMVector& m, V3Options opts = {});

/// f at a fractional z in [0,1]^p, and its analytic gradient.
double mic_relaxed_value(const ProblemSpec& spec, const Vector& z);
Vector mic_gradient(const ProblemSpec& spec, const Vector& z);

}  // namespace sridge
