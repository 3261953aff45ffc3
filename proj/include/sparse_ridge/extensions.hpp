#pragma once

// Choosing lambda by generalized cross-validation, and the reduction of
// sparse precision-matrix estimation to a sparse ridge problem.

#include "sparse_ridge/methods.hpp"
#include "sparse_ridge/model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sridge {

/// (1/n) sum_i ((y_i - yhat_i) / (1 - H_ii))^2 with the ridge hat matrix
/// H = X_S (X_S^T X_S + n lambda I)^{-1} X_S^T. Throws DegenerateHat when
/// some 1 - H_ii <= 1e-12.
double gcv_score(const ProblemSpec& spec, const Support& s, double lambda);

struct GcvPoint {
  double lambda = 0.0;
  std::optional<double> score;  // absent when the fit or the score failed
  Support support;
  std::string error;
};

struct GcvReport {
  std::vector<GcvPoint> points;  // grid order
  double best_lambda = 0.0;
  SparseEstimator best_estimator;
  std::vector<std::string> warnings;
};

/// One solver fit per grid value, scored on its own fitted support. Ties go
/// to the smallest lambda. Throws InvalidArgument for an empty or non-positive
/// grid, and NumericalFailure if no grid point could be scored.
GcvReport gcv_select(std::shared_ptr<const Dataset> data, Index k, const std::vector<double>& grid,
                     const SolverConfig& solver);

/// Sparse precision estimation min ||I - Sigma Omega||_F^2 + lambda ||Omega||_F^2
/// with ||Omega||_0 <= k, recast as a ridge problem in vec(Omega).
///
/// Omega is vectorized column-major, beta[i + t j] = Omega(i, j), so that the
/// design is block-diag(Sigma, ..., Sigma) and the response is vec(I). The
/// induced problem has n = p = t^2 and ridge weight lambda / t^2, hence
/// precision objective = scale * induced objective with scale = t^2.
struct PrecisionMapping {
  Index t = 0;
  Matrix sigma_hat;
  double lambda = 0.0;  // weight in the precision objective
  double scale = 0.0;   // t^2
  ProblemSpec spec;
};

/// Throws InvalidArgument for non-square, non-finite or asymmetric (beyond
/// 1e-10) input, or k outside [1, t^2].
PrecisionMapping precision_to_regression(const Matrix& sigma_hat, double lambda, Index k);

Vector encode_omega(const Matrix& omega);
Matrix decode_omega(const Vector& beta, const PrecisionMapping& mapping);

/// ||I - Sigma Omega||_F^2 + lambda ||Omega||_F^2.
double precision_objective(const PrecisionMapping& mapping, const Matrix& omega);

}  // namespace sridge
