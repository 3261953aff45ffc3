#pragma once

#include "sparse_ridge/model.hpp"

namespace sridge {

/// Evaluates the relaxed subset objective
///
///   f(z) = lambda y^T A(z)^{-1} y,
///   A(z) = n lambda I + sum_{i in fixed} x_i x_i^T + sum_{j in free} z_j x_j x_j^T,
///
/// together with its gradient -lambda (x_j^T A(z)^{-1} y)^2 over the free
/// coordinates. Columns are gathered once at construction. When the number of
/// active columns is below n the Woodbury identity reduces each evaluation to
/// an m x m Cholesky; otherwise A(z) is factored directly.
class MicModel {
 public:
  struct Evaluation {
    double value = 0.0;
    Vector correlation;  // x_j^T A(z)^{-1} y for each free j
    Vector gradient;     // -lambda * correlation^2
  };

  MicModel(const ProblemSpec& spec, Support fixed_one, Support free);

  /// Model over all p coordinates with nothing fixed.
  explicit MicModel(const ProblemSpec& spec);

  Evaluation evaluate(const Vector& z) const;

  Index dimension() const { return static_cast<Index>(free_.size()); }
  const Support& free() const { return free_; }
  const Support& fixed_one() const { return fixed_; }
  const ProblemSpec& spec() const { return spec_; }

 private:
  ProblemSpec spec_;
  Support fixed_;
  Support free_;
  Matrix cols_;   // [X_fixed, X_free]
  Vector cty_;    // cols_^T y
  Matrix gram_;   // cols_^T cols_, only when the Woodbury route is used
  bool woodbury_ = false;
  double yy_ = 0.0;
};

}  // namespace sridge
