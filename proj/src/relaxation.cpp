#include "sparse_ridge/relaxation.hpp"

#include "sparse_ridge/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

namespace sridge {

Vector project_capped_simplex(const Vector& v, double k) {
  if (!(k > 0.0)) throw InvalidArgument("capped simplex budget must be positive");
  const Vector clipped = v.cwiseMax(0.0).cwiseMin(1.0);
  if (clipped.sum() <= k) return clipped;

  // S(tau) = sum clip(v - tau, 0, 1) is piecewise linear and non-increasing
  // with kinks at v_i - 1 and v_i; locate the segment that crosses k.
  std::vector<double> kinks;
  kinks.reserve(static_cast<std::size_t>(2 * v.size() + 1));
  kinks.push_back(0.0);
  for (Index i = 0; i < v.size(); ++i) {
    if (v(i) - 1.0 > 0.0) kinks.push_back(v(i) - 1.0);
    if (v(i) > 0.0) kinks.push_back(v(i));
  }
  std::sort(kinks.begin(), kinks.end());
  auto level = [&](double tau) { return (v.array() - tau).cwiseMax(0.0).cwiseMin(1.0).sum(); };
  double lo = kinks.front();
  double s_lo = level(lo);
  for (std::size_t a = 1; a < kinks.size(); ++a) {
    const double hi = kinks[a];
    const double s_hi = level(hi);
    if (s_hi <= k) {
      const double tau = s_lo == s_hi ? hi : lo + (s_lo - k) * (hi - lo) / (s_lo - s_hi);
      return (v.array() - tau).cwiseMax(0.0).cwiseMin(1.0).matrix();
    }
    lo = hi;
    s_lo = s_hi;
  }
  // Unreachable: beyond the last kink the sum is zero.
  return Vector::Zero(v.size());
}

Vector waterfill_z(const Vector& beta, double k, const std::optional<Vector>& lower) {
  const Index p = beta.size();
  const Vector l = lower.value_or(Vector::Zero(p));
  if (l.size() != p) throw InvalidArgument("lower bound vector has wrong length");
  if ((l.array() < 0.0).any() || (l.array() > 1.0 + 1e-12).any()) {
    throw InvalidArgument("lower bounds must lie in [0, 1]");
  }
  if (l.sum() > k + 1e-9) throw InvalidArgument("lower bounds exceed the budget; z-subproblem is infeasible");

  const Vector a = beta.cwiseAbs();
  // z_i(s) = clamp(a_i s, l_i, 1) with s = 1/nu; h(s) = sum z_i(s) is
  // nondecreasing and piecewise linear, so the level is found exactly from
  // its breakpoints. Bisection on s breaks down once some a_i underflows.
  auto fill = [&](double s) {
    Vector z(p);
    for (Index i = 0; i < p; ++i) {
      const double lo = std::min(l(i), 1.0);
      z(i) = a(i) > 0.0 ? std::clamp(a(i) * s, lo, 1.0) : lo;
    }
    return z;
  };
  double saturated = 0.0;
  std::vector<double> breaks{0.0};
  for (Index i = 0; i < p; ++i) {
    if (a(i) > 0.0) {
      saturated += 1.0;
      breaks.push_back(std::min(l(i), 1.0) / a(i));
      breaks.push_back(1.0 / a(i));
    } else {
      saturated += std::min(l(i), 1.0);
    }
  }
  if (saturated <= k) return fill(std::numeric_limits<double>::infinity());
  std::erase_if(breaks, [](double b) { return !std::isfinite(b); });
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  // Last breakpoint with h <= k; h exceeds k somewhere past it.
  std::size_t lo = 0;
  std::size_t hi = breaks.size();
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    (fill(breaks[mid]).sum() <= k ? lo : hi) = mid;
  }
  const double left = breaks[lo];
  const double right = hi < breaks.size() ? breaks[hi] : std::numeric_limits<double>::infinity();
  const double probe = std::isfinite(right) ? 0.5 * (left + right) : 2.0 * left + 1.0;
  // Inside the segment h(s) = fixed + slope * s.
  const Vector at_probe = fill(probe);
  double fixed = 0.0;
  double slope = 0.0;
  for (Index i = 0; i < p; ++i) {
    const double low = std::min(l(i), 1.0);
    if (a(i) > 0.0 && a(i) * probe > low && a(i) * probe < 1.0) {
      slope += a(i);
    } else {
      fixed += at_probe(i);
    }
  }
  if (slope <= 0.0) return fill(left);
  return fill(std::clamp((k - fixed) / slope, left, right));
}

BigMVector big_m(const ProblemSpec& spec, std::optional<double> v_upper) {
  const double n = static_cast<double>(spec.n());
  const double yy = spec.y().squaredNorm();
  BigMVector out;
  out.v_upper = v_upper.value_or(yy / n);
  const Matrix gram = spec.x().transpose() * spec.x();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
  const double sigma_min = std::max(0.0, eig.eigenvalues()(0));
  out.rho = sigma_min / n + spec.lambda();
  const Vector xty = spec.x().transpose() * spec.y();
  const double rho = out.rho;
  double disc = xty.squaredNorm() / (n * n * rho * rho) + out.v_upper / rho - yy / (n * rho);
  const double scale = xty.squaredNorm() / (n * n * rho * rho) + std::abs(out.v_upper) / rho + yy / (n * rho);
  if (disc < 0.0) {
    if (disc < -1e-12 * std::max(1.0, scale)) {
      throw NumericalFailure("big-M discriminant is negative: v_upper lies below the attainable minimum");
    }
    disc = 0.0;
  }
  // |beta_i - a_i| <= sqrt(disc) with a = X^T y / (n rho).
  out.m = (xty / (n * rho)).cwiseAbs().array() + std::sqrt(disc);
  return out;
}

namespace {

double pg_residual(const Vector& z, const Vector& g, double budget) {
  return (z - project_capped_simplex(z - g, budget)).lpNorm<Eigen::Infinity>();
}

// Projected gradient over the capped simplex with Barzilai-Borwein trial
// steps and Armijo backtracking (constant 1e-4, halving).
template <class Eval>
RelaxationSolution projected_gradient(Eval&& eval, Vector z, double budget, double tol, int max_iter) {
  z = project_capped_simplex(z, budget);
  auto [f, g] = eval(z);
  double step = 1.0;
  RelaxationSolution sol;
  double res = pg_residual(z, g, budget);
  int it = 0;
  while (res > tol && it < max_iter) {
    ++it;
    bool accepted = false;
    Vector zt;
    double ft = 0.0;
    Vector gt;
    for (int bt = 0; bt < 80; ++bt) {
      zt = project_capped_simplex(z - step * g, budget);
      const Vector d = zt - z;
      if (d.lpNorm<Eigen::Infinity>() == 0.0) break;
      auto trial = eval(zt);
      const double slack = 1e-15 * std::max(1.0, std::abs(f));
      if (trial.first <= f + 1e-4 * g.dot(d) + slack) {
        ft = trial.first;
        gt = std::move(trial.second);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    const Vector s = zt - z;
    const Vector yv = gt - g;
    const double sy = s.dot(yv);
    step = sy > 0.0 ? std::clamp(s.squaredNorm() / sy, 1e-12, 1e12) : std::min(4.0 * step, 1e12);
    z = std::move(zt);
    f = ft;
    g = std::move(gt);
    res = pg_residual(z, g, budget);
  }
  sol.z = std::move(z);
  sol.value = f;
  sol.iterations = it;
  sol.kkt_residual = res;
  sol.converged = res <= tol;
  return sol;
}

Vector initial_z(Index p, double budget) {
  return Vector::Constant(p, std::min(1.0, budget / static_cast<double>(std::max<Index>(p, 1))));
}

}  // namespace

RelaxationSolution solve_mic_relaxation(const MicModel& model, double budget, V4Options opts,
                                        const std::optional<Vector>& warm) {
  const Index m = model.dimension();
  if (m == 0 || budget <= 0.0 || budget >= static_cast<double>(m)) {
    RelaxationSolution sol;
    sol.z = budget <= 0.0 ? Vector::Zero(m) : Vector::Ones(m);
    sol.value = model.evaluate(sol.z).value;
    sol.converged = true;
    return sol;
  }
  auto eval = [&](const Vector& z) {
    auto ev = model.evaluate(z);
    return std::make_pair(ev.value, std::move(ev.gradient));
  };
  Vector z0 = warm && warm->size() == m ? *warm : initial_z(m, budget);
  return projected_gradient(eval, std::move(z0), budget, opts.tol, opts.max_iter);
}

double mic_lower_bound(const MicModel& model, double budget, const Vector& z) {
  const auto ev = model.evaluate(z);
  const Index m = model.dimension();
  std::vector<Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) { return ev.gradient(a) < ev.gradient(b); });
  double linear_min = 0.0;
  double left = std::max(0.0, budget);
  for (Index i : order) {
    if (left <= 0.0 || ev.gradient(i) >= 0.0) break;
    const double take = std::min(1.0, left);
    linear_min += take * ev.gradient(i);
    left -= take;
  }
  return ev.value + linear_min - ev.gradient.dot(z);
}

RelaxationSolution solve_v4(const ProblemSpec& spec, V4Options opts) {
  const MicModel model(spec);
  return solve_mic_relaxation(model, static_cast<double>(spec.k()), opts);
}

double mic_relaxed_value(const ProblemSpec& spec, const Vector& z) { return MicModel(spec).evaluate(z).value; }

Vector mic_gradient(const ProblemSpec& spec, const Vector& z) { return MicModel(spec).evaluate(z).gradient; }

RelaxationSolution solve_v2_perspective(const ProblemSpec& spec, V2Options opts) {
  const MicModel model(spec);
  const double k = static_cast<double>(spec.k());
  Vector z = initial_z(spec.p(), k);
  RelaxationSolution sol;
  double prev = std::numeric_limits<double>::infinity();
  int it = 0;
  MicModel::Evaluation ev;
  Vector beta;
  for (;;) {
    // beta-step: the weighted ridge solution is beta_i = z_i x_i^T A(z)^{-1} y.
    ev = model.evaluate(z);
    beta = z.cwiseProduct(ev.correlation);
    // Stop on the certified gap, not on the per-sweep decrease: the sweeps
    // can stall well above the optimum while z_i drifts towards zero.
    if (prev - ev.value <= opts.tol * (1.0 + std::abs(ev.value)) &&
        ev.value - mic_lower_bound(model, k, z) <= opts.tol * (1.0 + std::abs(ev.value))) {
      sol.converged = true;
      break;
    }
    if (it >= opts.max_iter) break;
    prev = ev.value;
    z = waterfill_z(beta, k);
    ++it;
  }
  sol.z = z;
  sol.value = ev.value;
  sol.iterations = it;
  sol.kkt_residual = pg_residual(z, ev.gradient, k);
  sol.beta = beta;
  return sol;
}

namespace {

// Projection onto {sum |b_i| / M_i <= k, |b_i| <= M_i}.
Vector project_weighted_l1_box(const Vector& v, const Vector& m, double k) {
  const Index p = v.size();
  auto shrink = [&](double tau) {
    Vector out(p);
    for (Index i = 0; i < p; ++i) {
      if (m(i) <= 0.0) {
        out(i) = 0.0;
        continue;
      }
      const double mag = std::clamp(std::abs(v(i)) - tau / m(i), 0.0, m(i));
      out(i) = std::copysign(mag, v(i));
    }
    return out;
  };
  auto load = [&](const Vector& b) {
    double s = 0.0;
    for (Index i = 0; i < p; ++i) {
      if (m(i) > 0.0) s += std::abs(b(i)) / m(i);
    }
    return s;
  };
  Vector b = shrink(0.0);
  if (load(b) <= k) return b;
  double lo = 0.0;
  double hi = 0.0;
  for (Index i = 0; i < p; ++i) hi = std::max(hi, std::abs(v(i)) * m(i));
  for (int it = 0; it < 200 && hi - lo > std::numeric_limits<double>::epsilon() * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (load(shrink(mid)) > k) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return shrink(hi);
}

}  // namespace

RelaxationSolution solve_v1(const ProblemSpec& spec, const BigMVector& bm, V1Options opts) {
  const Index p = spec.p();
  if (bm.m.size() != p) throw InvalidArgument("big-M vector has wrong length");
  if ((bm.m.array() < 0.0).any()) throw InvalidArgument("big-M entries must be nonnegative");
  const double n = static_cast<double>(spec.n());
  const double k = static_cast<double>(spec.k());
  const Matrix gram = spec.x().transpose() * spec.x() / n;
  const Vector c = spec.x().transpose() * spec.y() / n;
  const double lambda = spec.lambda();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
  const double lip = 2.0 * (std::max(0.0, eig.eigenvalues()(p - 1)) + lambda);

  auto grad = [&](const Vector& b) -> Vector { return 2.0 * (gram * b + lambda * b - c); };
  auto objective = [&](const Vector& b) { return b.dot(gram * b) + lambda * b.squaredNorm() - 2.0 * c.dot(b); };

  // FISTA with gradient-based restart.
  Vector x = Vector::Zero(p);
  Vector yk = x;
  double t = 1.0;
  double res = std::numeric_limits<double>::infinity();
  int it = 0;
  while (it < opts.max_iter) {
    ++it;
    const Vector xn = project_weighted_l1_box(yk - grad(yk) / lip, bm.m, k);
    if ((yk - xn).dot(xn - x) > 0.0) {
      t = 1.0;
      yk = x;
      continue;
    }
    const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    yk = xn + ((t - 1.0) / tn) * (xn - x);
    x = xn;
    t = tn;
    if (it % 10 == 0) {
      res = (x - project_weighted_l1_box(x - grad(x) / lip, bm.m, k)).lpNorm<Eigen::Infinity>();
      if (res <= opts.tol) break;
    }
  }
  (void)objective;
  RelaxationSolution sol;
  sol.value = ridge_objective(spec, x);
  sol.z.resize(p);
  for (Index i = 0; i < p; ++i) sol.z(i) = bm.m(i) > 0.0 ? std::min(1.0, std::abs(x(i)) / bm.m(i)) : 0.0;
  sol.iterations = it;
  sol.kkt_residual = res;
  sol.converged = res <= opts.tol;
  sol.beta = std::move(x);
  return sol;
}

namespace {

// min_beta (1/n)||y - X beta||^2 + lambda sum_{z_i > 0} beta_i^2 / z_i
//   s.t. |beta_i| <= M_i z_i   (beta_i = 0 where z_i = 0)
class PerspectiveBoxQp {
 public:
  PerspectiveBoxQp(const ProblemSpec& spec, const Vector& m)
      : gram_(spec.x().transpose() * spec.x()),
        c_(spec.x().transpose() * spec.y() / static_cast<double>(spec.n())),
        m_(m),
        n_(static_cast<double>(spec.n())),
        lambda_(spec.lambda()),
        yy_n_(spec.y().squaredNorm() / static_cast<double>(spec.n())),
        beta_(Vector::Zero(spec.p())),
        gbeta_(Vector::Zero(spec.p())) {}

  void solve(const Vector& z) {
    const Index p = beta_.size();
    for (Index i = 0; i < p; ++i) {
      const double cap = z(i) > 0.0 ? m_(i) * z(i) : 0.0;
      set(i, std::clamp(beta_(i), -cap, cap));
    }
    for (int sweep = 0; sweep < 50000; ++sweep) {
      double max_delta = 0.0;
      for (Index i = 0; i < p; ++i) {
        if (z(i) <= 0.0) continue;
        const double q = gram_(i, i) / n_ + lambda_ / z(i);
        const double r = c_(i) - (gbeta_(i) - gram_(i, i) * beta_(i)) / n_;
        const double cap = m_(i) * z(i);
        const double b = std::clamp(r / q, -cap, cap);
        max_delta = std::max(max_delta, std::abs(b - beta_(i)));
        set(i, b);
      }
      if (max_delta <= 1e-15 * std::max(1e-300, beta_.lpNorm<Eigen::Infinity>())) break;
    }
    polish(z);
  }

  double value(const Vector& z) const {
    double pen = 0.0;
    for (Index i = 0; i < beta_.size(); ++i) {
      if (z(i) > 0.0) pen += beta_(i) * beta_(i) / z(i);
    }
    return yy_n_ - 2.0 * c_.dot(beta_) + beta_.dot(gbeta_) / n_ + lambda_ * pen;
  }

  // Envelope gradient: -lambda beta_i^2 / z_i^2 - eta_i M_i with eta the
  // multiplier of |beta_i| <= M_i z_i. At z_i = 0 the one-sided limit is used.
  Vector gradient(const Vector& z) const {
    const Index p = beta_.size();
    Vector g(p);
    for (Index i = 0; i < p; ++i) {
      const double corr = c_(i) - gbeta_(i) / n_;  // x_i^T r / n
      if (z(i) <= 0.0) {
        const double ratio = corr / lambda_;
        g(i) = std::abs(ratio) <= m_(i) ? -lambda_ * ratio * ratio
                                        : lambda_ * m_(i) * m_(i) - 2.0 * lambda_ * m_(i) * std::abs(ratio);
        continue;
      }
      const double ratio = beta_(i) / z(i);
      double gi = -lambda_ * ratio * ratio;
      if (at_bound(i, z)) {
        const double d = -2.0 * corr + 2.0 * lambda_ * ratio;
        const double eta = std::max(0.0, -std::copysign(1.0, beta_(i)) * d);
        gi -= eta * m_(i);
      }
      g(i) = gi;
    }
    return g;
  }

  const Vector& beta() const { return beta_; }

 private:
  void set(Index i, double b) {
    const double delta = b - beta_(i);
    if (delta != 0.0) {
      gbeta_ += gram_.col(i) * delta;
      beta_(i) = b;
    }
  }

  bool at_bound(Index i, const Vector& z) const {
    return m_(i) * z(i) > 0.0 && std::abs(beta_(i)) >= m_(i) * z(i) * (1.0 - 1e-10);
  }

  // Exact solve on the free set identified by coordinate descent; accepted
  // only if it stays inside the box.
  void polish(const Vector& z) {
    const Index p = beta_.size();
    std::vector<Index> free;
    for (Index i = 0; i < p; ++i) {
      if (z(i) > 0.0 && !at_bound(i, z)) free.push_back(i);
    }
    if (free.empty()) return;
    const Index f = static_cast<Index>(free.size());
    Matrix q(f, f);
    Vector rhs(f);
    for (Index a = 0; a < f; ++a) {
      const Index i = free[static_cast<std::size_t>(a)];
      rhs(a) = c_(i) - gbeta_(i) / n_;
      for (Index b = 0; b < f; ++b) {
        const Index j = free[static_cast<std::size_t>(b)];
        q(a, b) = gram_(i, j) / n_;
        rhs(a) += gram_(i, j) / n_ * beta_(j);
      }
      q(a, a) += lambda_ / z(i);
    }
    Eigen::LLT<Matrix> llt(q);
    if (llt.info() != Eigen::Success) return;
    const Vector bf = llt.solve(rhs);
    for (Index a = 0; a < f; ++a) {
      const Index i = free[static_cast<std::size_t>(a)];
      if (std::abs(bf(a)) > m_(i) * z(i)) return;
    }
    for (Index a = 0; a < f; ++a) set(free[static_cast<std::size_t>(a)], bf(a));
  }

  Matrix gram_;
  Vector c_;
  Vector m_;
  double n_;
  double lambda_;
  double yy_n_;
  Vector beta_;
  Vector gbeta_;
};

}  // namespace

RelaxationSolution solve_v3(const ProblemSpec& spec, const BigMVector& bm, V3Options opts) {
  const Index p = spec.p();
  if (bm.m.size() != p) throw InvalidArgument("big-M vector has wrong length");
  if ((bm.m.array() < 0.0).any()) throw InvalidArgument("big-M entries must be nonnegative");
  const double k = static_cast<double>(spec.k());
  PerspectiveBoxQp qp(spec, bm.m);
  auto eval = [&](const Vector& z) {
    qp.solve(z);
    return std::make_pair(qp.value(z), qp.gradient(z));
  };
  RelaxationSolution sol;
  if (k >= static_cast<double>(p)) {
    sol.z = Vector::Ones(p);
    sol.value = eval(sol.z).first;
    sol.converged = true;
  } else {
    sol = projected_gradient(eval, initial_z(p, k), k, opts.tol, opts.max_iter);
    qp.solve(sol.z);
    sol.value = qp.value(sol.z);
  }
  sol.beta = qp.beta();
  return sol;
}

}  // namespace sridge
