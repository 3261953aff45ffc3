#include "sparse_ridge/extensions.hpp"

#include "sparse_ridge/errors.hpp"

#include <cmath>
#include <limits>

namespace sridge {

double gcv_score(const ProblemSpec& spec, const Support& support, double lambda) {
  if (!(lambda > 0.0)) throw InvalidArgument("lambda must be positive");
  const Support s = normalize_support(support, spec.p());
  const Index n = spec.n();
  const double nd = static_cast<double>(n);
  Vector fitted = Vector::Zero(n);
  Vector hat_diag = Vector::Zero(n);
  if (!s.empty()) {
    const Index m = static_cast<Index>(s.size());
    Matrix xs(n, m);
    for (Index j = 0; j < m; ++j) xs.col(j) = spec.x().col(s[static_cast<std::size_t>(j)]);
    Matrix a = xs.transpose() * xs;
    a.diagonal().array() += nd * lambda;
    Eigen::LLT<Matrix> llt(a);
    if (llt.info() != Eigen::Success) throw NumericalFailure("hat-matrix system is not positive definite");
    // H = W^T W with W = L^{-1} X_S^T.
    const Matrix w = llt.matrixL().solve(xs.transpose());
    hat_diag = w.colwise().squaredNorm().transpose();
    fitted = w.transpose() * (w * spec.y());
  }
  double total = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double denom = 1.0 - hat_diag(i);
    if (denom <= 1e-12) throw DegenerateHat("hat-matrix diagonal is numerically one at row " + std::to_string(i));
    const double r = (spec.y()(i) - fitted(i)) / denom;
    total += r * r;
  }
  return total / nd;
}

GcvReport gcv_select(std::shared_ptr<const Dataset> data, Index k, const std::vector<double>& grid,
                     const SolverConfig& solver) {
  if (grid.empty()) throw InvalidArgument("lambda grid is empty");
  for (double l : grid) {
    if (!(l > 0.0) || !std::isfinite(l)) throw InvalidArgument("lambda grid values must be positive and finite");
  }
  if (!is_solver(solver.method)) throw InvalidArgument("unknown method '" + solver.method + "'");

  GcvReport report;
  double best = std::numeric_limits<double>::infinity();
  for (double lambda : grid) {
    GcvPoint point;
    point.lambda = lambda;
    try {
      const ProblemSpec spec(data, lambda, k);
      SolverOutcome fit = run_solver(spec, solver);
      point.support = fit.estimator.support;
      point.score = gcv_score(spec, point.support, lambda);
      if (*point.score < best || (*point.score == best && lambda < report.best_lambda)) {
        best = *point.score;
        report.best_lambda = lambda;
        report.best_estimator = std::move(fit.estimator);
      }
    } catch (const Error& e) {
      point.error = e.what();
      report.warnings.push_back("lambda " + std::to_string(lambda) + " excluded: " + e.what());
    }
    report.points.push_back(std::move(point));
  }
  if (!std::isfinite(best)) throw NumericalFailure("no grid point produced a valid GCV score");
  return report;
}

namespace {

ProblemSpec induced_problem(const Matrix& sigma, double lambda, Index k) {
  const Index t = sigma.rows();
  const Index tt = t * t;
  Matrix x = Matrix::Zero(tt, tt);
  for (Index b = 0; b < t; ++b) x.block(b * t, b * t, t, t) = sigma;
  const Vector y = encode_omega(Matrix::Identity(t, t));
  return ProblemSpec(Dataset(std::move(x), y), lambda / static_cast<double>(tt), k);
}

}  // namespace

PrecisionMapping precision_to_regression(const Matrix& sigma_hat, double lambda, Index k) {
  if (sigma_hat.rows() == 0 || sigma_hat.rows() != sigma_hat.cols()) {
    throw InvalidArgument("covariance matrix must be square and non-empty");
  }
  if (!sigma_hat.allFinite()) throw InvalidArgument("covariance matrix has non-finite entries");
  if ((sigma_hat - sigma_hat.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
    throw InvalidArgument("covariance matrix is not symmetric");
  }
  const Index t = sigma_hat.rows();
  if (k < 1 || k > t * t) throw InvalidArgument("k must lie in [1, t^2]");
  return PrecisionMapping{t, sigma_hat, lambda, static_cast<double>(t * t), induced_problem(sigma_hat, lambda, k)};
}

Vector encode_omega(const Matrix& omega) {
  return Eigen::Map<const Vector>(omega.data(), omega.size());
}

Matrix decode_omega(const Vector& beta, const PrecisionMapping& mapping) {
  const Index t = mapping.t;
  if (beta.size() != t * t) throw InvalidArgument("coefficient vector length must be t^2");
  return Eigen::Map<const Matrix>(beta.data(), t, t);
}

double precision_objective(const PrecisionMapping& mapping, const Matrix& omega) {
  const Matrix resid = Matrix::Identity(mapping.t, mapping.t) - mapping.sigma_hat * omega;
  return resid.squaredNorm() + mapping.lambda * omega.squaredNorm();
}

}  // namespace sridge
