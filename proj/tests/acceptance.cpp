// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. Reference values come from the oracles in
// oracles.hpp (explicit inverses, exhaustive enumeration), never from the
// library code under test.

#include "oracles.hpp"

#include "sparse_ridge/bench.hpp"
#include "sparse_ridge/exact.hpp"
#include "sparse_ridge/extensions.hpp"
#include "sparse_ridge/greedy.hpp"
#include "sparse_ridge/heuristic.hpp"
#include "sparse_ridge/kernels.hpp"
#include "sparse_ridge/randomized.hpp"
#include "sparse_ridge/relaxation.hpp"
#include "sparse_ridge/synthetic.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace sridge;

namespace {

using Clock = std::chrono::steady_clock;

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

int failures = 0;

void criterion(int id, const char* name, const std::function<void(Verdict&)>& body) {
  Verdict v;
  const auto t0 = Clock::now();
  try {
    body(v);
  } catch (const std::exception& e) {
    v.require(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (!v.pass) ++failures;
  std::printf("%s %2d %-28s %s[%.2fs]\n", v.pass ? "PASS" : "FAIL", id, name, v.detail.str().c_str(), secs);
  std::fflush(stdout);
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// The shared random corpus for the relaxation criteria:
// n <= 30, p <= 12, k <= 4, lambda in {0.01, 0.1, 1}.
ProblemSpec relaxation_instance(int i) {
  const double lambdas[] = {0.01, 0.1, 1.0};
  const Index p = 4 + i % 9;
  const Index n = 6 + (i * 7) % 25;
  const Index k = std::min<Index>(p, 1 + i % 4);
  return oracle::random_spec(1000 + static_cast<std::uint64_t>(i), n, p, k, lambdas[i % 3]);
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

}  // namespace

int main() {
  std::printf("simd path: %s\n", std::string(kernels::isa_name(kernels::active_isa())).c_str());

  criterion(1, "worked-example exactness", [](Verdict& v) {
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (double lambda : {0.05, 0.1, 0.2}) {
      const auto spec = oracle::two_by_two(lambda);
      const double vstar = lambda / (1 + 2 * lambda) + 0.5;
      const double v24 = 4 * lambda / (1 + 4 * lambda);
      const double v1 = 2 * lambda / (1 + 2 * lambda);
      const RelaxationSolution r4 = solve_v4(spec);
      const RelaxationSolution r2 = solve_v2_perspective(spec);
      BigMVector bm;
      bm.m = Vector::Constant(2, std::sqrt(1.0 / lambda));
      const RelaxationSolution r1 = solve_v1(spec, bm);
      v.require(r4.converged && r2.converged && r1.converged, "relaxation not converged");
      for (double err : {std::abs(brute_force(spec).objective - vstar), std::abs(r4.value - v24),
                         std::abs(r2.value - v24), std::abs(r1.value - v1)}) {
        worst = std::max(worst, err);
        v.require(err <= 1e-6, "value off by " + fmt(err) + " at lambda " + fmt(lambda));
      }
    }
    const double secs = seconds_since(t0);
    v.require(secs < 1.0, "runtime " + fmt(secs) + " s");
    v.detail << "max abs error " << fmt(worst) << " ";
  });

  criterion(2, "relaxation equivalence", [](Verdict& v) {
    const auto t0 = Clock::now();
    double worst = 0.0;
    int converged = 0;
    for (int i = 0; i < 50; ++i) {
      const auto spec = relaxation_instance(i);
      const RelaxationSolution r4 = solve_v4(spec);
      const RelaxationSolution r2 = solve_v2_perspective(spec);
      if (!(r4.converged && r2.converged)) continue;
      ++converged;
      const double rel = std::abs(r2.value - r4.value) / (1 + r4.value);
      worst = std::max(worst, rel);
      v.require(rel <= 1e-5, "instance " + std::to_string(i) + " gap " + fmt(rel));
    }
    v.require(converged == 50, std::to_string(50 - converged) + " runs did not converge");
    const double secs = seconds_since(t0);
    v.require(secs < 120.0, "runtime " + fmt(secs) + " s");
    v.detail << converged << "/50 converged, max |v2-v4|/(1+v4) " << fmt(worst) << " ";
  });

  criterion(3, "relaxation ordering", [](Verdict& v) {
    int converged = 0;
    double slack = -1e300;
    for (int i = 0; i < 50; ++i) {
      const auto spec = relaxation_instance(i);
      const double vstar = oracle::best_subset(spec).value;
      const BigMVector bm = big_m(spec);
      const RelaxationSolution r1 = solve_v1(spec, bm);
      const RelaxationSolution r2 = solve_v2_perspective(spec);
      const RelaxationSolution r3 = solve_v3(spec, bm);
      const RelaxationSolution r4 = solve_v4(spec);
      if (!(r1.converged && r2.converged && r3.converged && r4.converged)) continue;
      ++converged;
      const std::string tag = "instance " + std::to_string(i);
      v.require(r1.value <= r3.value + 1e-6, tag + " v1 > v3");
      v.require(r2.value <= r3.value + 1e-6, tag + " v2 > v3");
      const double top = std::max({r1.value, r2.value, r3.value, r4.value});
      v.require(top <= vstar + 1e-6, tag + " relaxation above v*");
      slack = std::max({slack, r1.value - r3.value, r2.value - r3.value, top - vstar});
    }
    v.require(converged == 50, std::to_string(50 - converged) + " runs did not converge");
    v.detail << converged << "/50 converged, largest violation margin " << fmt(slack) << " ";
  });

  criterion(4, "greedy guarantee", [](Verdict& v) {
    double worst_ratio = 0.0;
    double worst_dist = 0.0;
    int suboptimal = 0;
    for (int i = 0; i < 30; ++i) {
      // Half planted-sparse designs, half correlated ones where greedy can miss.
      const double lambdas[] = {0.001, 0.01, 0.05};
      const auto spec = i < 15 ? oracle::random_spec(2000 + static_cast<std::uint64_t>(i), 8 + i % 13, 5 + i % 6,
                                                     1 + i % 3, 0.02 + 0.03 * (i % 5))
                               : oracle::correlated_spec(2000 + static_cast<std::uint64_t>(i), 6 + i % 10,
                                                         6 + i % 5, 2 + i % 2, lambdas[i % 3]);
      const auto best = oracle::best_subset(spec);
      const GreedyResult g = greedy_select(spec);
      const SpectralStats stats = spectral_stats(spec, SpectralMode::exact);
      const double b = greedy_ratio_bound(spec, stats);
      const std::string tag = "instance " + std::to_string(i);
      v.require(best.value <= g.value + 1e-10, tag + " greedy below v*");
      v.require(g.value <= b * best.value + 1e-10, tag + " greedy above B v*");
      worst_ratio = std::max(worst_ratio, g.value / best.value / b);
      if (g.value > best.value * (1 + 1e-9)) ++suboptimal;
      const Vector beta_star = oracle::ridge_fit(spec, best.support);
      const double dist = (g.estimator.beta - beta_star).norm();
      const Support opt(best.support.begin(), best.support.end());
      const double bound = greedy_distance_bound(spec, stats, g.estimator.support, opt, best.value);
      v.require(dist <= bound + 1e-9, tag + " distance " + fmt(dist) + " > " + fmt(bound));
      if (bound > 0) worst_dist = std::max(worst_dist, dist / bound);
    }
    v.detail << suboptimal << "/30 greedy suboptimal, max (vG/v*)/B " << fmt(worst_ratio) << ", max dist/bound " << fmt(worst_dist) << " ";
  });

  criterion(5, "sherman-morrison exactness", [](Verdict& v) {
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const Index n = 10 + (i * 7) % 41;
      const Index p = 20 + (i * 13) % 81;
      const auto spec = oracle::random_spec(3000 + static_cast<std::uint64_t>(i), n, p, std::min<Index>({12, n, p}), 0.05);
      greedy_select(spec, [&](const GreedyState& st) {
        const Matrix inv = oracle::inverse(oracle::subset_system(spec, st.selected()));
        for (Index j = 0; j < p; ++j) {
          const Vector direct = oracle::matvec(inv, spec.x().col(j));
          worst = std::max(worst, (st.inv_products().col(j) - direct).lpNorm<Eigen::Infinity>());
          worst = std::max(worst, std::abs(st.quad_terms()(j) - spec.x().col(j).dot(direct)));
          worst = std::max(worst, std::abs(st.cross_terms()(j) - spec.y().dot(direct)));
        }
        worst = std::max(worst, (st.inv_y() - oracle::matvec(inv, spec.y())).lpNorm<Eigen::Infinity>());
      });
    }
    v.require(worst <= 1e-8, "max deviation " + fmt(worst));
    v.detail << "max deviation " << fmt(worst) << " ";
  });

  criterion(6, "bisection contract", [](Verdict& v) {
    const double delta_hat = 1e-4;
    int runs = 0;
    for (int i = 0; i < 20; ++i) {
      const auto spec = i == 0 ? oracle::two_by_two(0.1)
                               : oracle::random_spec(4000 + static_cast<std::uint64_t>(i), 10 + i % 15,
                                                     4 + i % 7, 1 + i % 3, 0.02 + 0.04 * (i % 4));
      const BisectionResult r = heuristic_bisection(spec, delta_hat);
      const double bound =
          std::floor(std::log2(spec.y().squaredNorm() / (static_cast<double>(spec.n()) * delta_hat))) + 1;
      const std::string tag = "instance " + std::to_string(i);
      v.require(static_cast<double>(r.trace.size()) <= bound, tag + " iterations above bound");
      v.require(static_cast<Index>(r.estimator.support.size()) <= spec.k(), tag + " infeasible output");
      const double vstar = oracle::best_subset(spec).value;
      v.require(r.value >= vstar - 1e-9, tag + " heuristic below v*");
      v.require(std::abs(r.value - oracle::ridge(spec, r.estimator.beta)) <= 1e-9, tag + " value mismatch");
      ++runs;
    }
    v.detail << runs << " runs ";
  });

  criterion(7, "rounding statistics", [](Verdict& v) {
    const int trials = 10000;
    double worst_mean = 0.0;
    for (int i = 0; i < 5; ++i) {
      const auto spec = oracle::random_spec(5000 + static_cast<std::uint64_t>(i), 30, 25 + 5 * i, 3 + i, 0.05);
      const RelaxationSolution relax = solve_v4(spec);
      v.require(relax.converged, "relaxation not converged");
      const Vector& z = relax.z;
      double var = 0.0;
      for (Index j = 0; j < z.size(); ++j) var += z(j) * (1 - z(j));
      for (double alpha : {0.1, 0.3}) {
        RandomizedOptions opts;
        opts.trials = trials;
        opts.seed = 77 + static_cast<std::uint64_t>(i);
        opts.alpha = alpha;
        const RandomizedResult r = randomized_solve(spec, z, opts);
        const double dev = std::abs(r.stats.mean_cardinality - z.sum()) / std::sqrt(var / trials);
        worst_mean = std::max(worst_mean, dev);
        v.require(dev <= 3.0, "mean cardinality off by " + fmt(dev) + " sigma");
        const double q = alpha / 2;
        v.require(r.stats.p_exceed_bound <= q + 3.0 * std::sqrt(q * (1 - q) / trials),
                  "exceedance " + fmt(r.stats.p_exceed_bound) + " at alpha " + fmt(alpha));
      }
    }
    v.detail << "max mean deviation " << fmt(worst_mean) << " sigma ";
  });

  criterion(8, "big-M validity", [](Verdict& v) {
    double worst = 0.0;
    for (int i = 0; i < 30; ++i) {
      const auto spec = oracle::random_spec(6000 + static_cast<std::uint64_t>(i), 6 + i % 20, 4 + i % 8,
                                            1 + i % 4, 0.01 + 0.05 * (i % 4));
      const auto best = oracle::best_subset(spec);
      const Vector beta = oracle::ridge_fit(spec, best.support);
      const BigMVector bm = big_m(spec);
      for (Index j = 0; j < spec.p(); ++j) {
        v.require(std::abs(beta(j)) <= bm.m(j) + 1e-12, "instance " + std::to_string(i));
        worst = std::max(worst, std::abs(beta(j)) / bm.m(j));
      }
    }
    v.detail << "max |beta*_i|/M_i " << fmt(worst) << " ";
  });

  criterion(9, "branch-and-bound exactness", [](Verdict& v) {
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const Index p = 6 + i % 9;  // up to 14
      const auto spec = oracle::random_spec(7000 + static_cast<std::uint64_t>(i), 12 + i % 10, p,
                                            2 + i % 3, 0.01 + 0.04 * (i % 3));
      const double vstar = oracle::best_subset(spec).value;
      const BnbResult r = branch_and_bound(spec);
      const RelaxationSolution root = solve_v4(spec, V4Options{1e-9, 20000});
      const std::string tag = "instance " + std::to_string(i);
      const double rel = std::abs(r.value - vstar) / vstar;
      worst = std::max(worst, rel);
      v.require(rel <= 1e-6, tag + " value off by " + fmt(rel));
      v.require(r.proven && r.gap <= 1e-6, tag + " gap not closed");
      v.require(std::abs(r.root_bound - root.value) <= 1e-6 * (1 + root.value), tag + " root bound differs from v4");
    }
    v.detail << "max relative error " << fmt(worst) << " ";
  });

  criterion(10, "scaled experimental trend", [](Verdict& v) {
    BenchConfig cfg;
    cfg.ps = {200};
    cfg.ns = {100, 1000};
    cfg.ks = {10};
    cfg.reps = 10;
    cfg.seed = 2024;
    cfg.lambda = 0.08;
    cfg.rho = 0.5;
    cfg.snr = 9.0;
    const BenchReport rep = run_benchmark(cfg);
    double fa_small = -1, fa_large = -1;
    for (const auto& a : rep.aggregates) {
      v.require(a.count == 10, "failed records");
      (a.cell.n == 100 ? fa_small : fa_large) = a.mean_false_alarm;
    }
    v.require(fa_large <= fa_small, "false alarms grow with n");
    v.require(fa_large <= 10.0, "false alarm rate above 10% at n = 1000");

    SyntheticConfig big;
    big.n = 1000;
    big.p = 1000;
    big.k_true = 20;
    big.seed = 1;
    const SyntheticData d = generate_synthetic(big);
    const ProblemSpec spec(d.dataset, 0.08, 20);
    const auto t0 = Clock::now();
    greedy_select(spec);
    const double secs = seconds_since(t0);
    v.require(secs <= 30.0, "greedy took " + fmt(secs) + " s");
    v.detail << "false alarm n=100 " << fmt(fa_small) << "%, n=1000 " << fmt(fa_large)
             << "%, greedy n=p=1000 k=20 " << fmt(secs) << " s ";
  });

  criterion(11, "gradient check", [](Verdict& v) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      const Index p = 4 + i % 5;
      const auto spec = oracle::random_spec(8000 + static_cast<std::uint64_t>(i), 6 + i, p, 2, 0.02 + 0.05 * (i % 3));
      for (int t = 0; t < 20; ++t) {
        Vector z(p);
        for (Index j = 0; j < p; ++j) z(j) = u(rng);
        const Vector g = mic_gradient(spec, z);
        Vector fd(p);
        for (Index j = 0; j < p; ++j) {
          Vector zp = z, zm = z;
          zp(j) += 1e-5;
          zm(j) -= 1e-5;
          fd(j) = (oracle::mic_fractional(spec, zp) - oracle::mic_fractional(spec, zm)) / 2e-5;
        }
        const double rel = (g - fd).norm() / std::max(fd.norm(), 1e-300);
        worst = std::max(worst, rel);
        v.require(rel <= 1e-4, "instance " + std::to_string(i) + " relative error " + fmt(rel));
      }
    }
    v.detail << "max relative error " << fmt(worst) << " ";
  });

  criterion(12, "precision-matrix identity", [](Verdict& v) {
    std::mt19937_64 rng(12);
    std::normal_distribution<double> normal(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const Index t = 1 + i % 6;
      Matrix a(t + 4, t);
      for (Index r = 0; r < a.rows(); ++r)
        for (Index c = 0; c < t; ++c) a(r, c) = normal(rng);
      Matrix sigma = a.transpose() * a / static_cast<double>(a.rows());
      sigma = 0.5 * (sigma + sigma.transpose());
      const Index k = 1 + i % (t * t);
      const double lambda = 0.05 + 0.1 * (i % 3);
      const PrecisionMapping map = precision_to_regression(sigma, lambda, k);
      Matrix omega(t, t);
      for (Index r = 0; r < t; ++r)
        for (Index c = 0; c < t; ++c) omega(r, c) = normal(rng);
      double direct = 0.0;
      for (Index r = 0; r < t; ++r)
        for (Index c = 0; c < t; ++c) {
          double e = r == c ? 1.0 : 0.0;
          for (Index l = 0; l < t; ++l) e -= sigma(r, l) * omega(l, c);
          direct += e * e;
        }
      const Vector beta = encode_omega(omega);
      const double via_regression = (map.spec.y() - map.spec.x() * beta).squaredNorm();
      worst = std::max(worst, std::abs(via_regression - direct));
      worst = std::max(worst, std::abs(precision_objective(map, omega) -
                                       (direct + lambda * omega.squaredNorm())));
      worst = std::max(worst, std::abs(precision_objective(map, omega) - map.scale * ridge_objective(map.spec, beta)));
      const Matrix decoded = decode_omega(greedy_select(map.spec).estimator.beta, map);
      v.require((decoded.array() != 0.0).count() <= k, "decoded Omega exceeds k nonzeros");
    }
    v.require(worst <= 1e-10, "identity off by " + fmt(worst));
    v.detail << "max identity error " << fmt(worst) << " ";
  });

  std::printf("%s: %d of 12 criteria failed\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
