#include "sparse_ridge/methods.hpp"

#include "sparse_ridge/errors.hpp"

#include <algorithm>

namespace sridge {

const std::vector<std::string>& solver_names() {
  static const std::vector<std::string> names{"greedy", "restricted", "randomized", "heuristic", "brute", "bnb"};
  return names;
}

bool is_solver(const std::string& name) {
  const auto& names = solver_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

SolverOutcome run_solver(const ProblemSpec& spec, const SolverConfig& config) {
  SolverOutcome out;
  out.method = config.method;
  const std::string& m = config.method;
  if (m == "greedy") {
    GreedyResult r = greedy_select(spec);
    out.estimator = std::move(r.estimator);
    out.greedy_trace = std::move(r.trace);
    out.warnings = std::move(r.warnings);
  } else if (m == "restricted") {
    RelaxationSolution relax = solve_v4(spec);
    if (!relax.converged) out.warnings.push_back("relaxation stopped before reaching its tolerance");
    GreedyResult r = restricted_greedy(spec, relax.z, config.delta);
    out.estimator = std::move(r.estimator);
    out.greedy_trace = std::move(r.trace);
    out.warnings.insert(out.warnings.end(), r.warnings.begin(), r.warnings.end());
    out.relaxation = std::move(relax);
  } else if (m == "randomized") {
    RelaxationSolution relax = solve_v4(spec);
    if (!relax.converged) out.warnings.push_back("relaxation stopped before reaching its tolerance");
    RandomizedOptions opts;
    opts.trials = config.trials;
    opts.seed = config.seed;
    opts.repair = config.repair;
    opts.alpha = config.alpha;
    RandomizedResult r = randomized_solve(spec, relax.z, opts);
    if (!config.repair && r.best.cardinality > spec.k()) {
      // Raw draws may exceed the budget; the returned estimator stays feasible.
      out.warnings.push_back("best raw draw exceeds k; estimator is trimmed to the k largest coefficients");
      SparseEstimator full = fit_support(spec, r.best.support);
      std::vector<Index> order(full.support);
      std::stable_sort(order.begin(), order.end(),
                       [&](Index a, Index b) { return std::abs(full.beta(a)) > std::abs(full.beta(b)); });
      order.resize(static_cast<std::size_t>(spec.k()));
      r.estimator = restricted_estimator(spec, order);
    }
    out.estimator = r.estimator;
    out.randomized = std::move(r);
    out.relaxation = std::move(relax);
  } else if (m == "heuristic") {
    BisectionResult r = heuristic_bisection(spec, config.delta_hat);
    out.estimator = r.estimator;
    out.bisection = std::move(r);
  } else if (m == "brute") {
    out.estimator = brute_force(spec);
  } else if (m == "bnb") {
    BnbOptions opts;
    opts.gap_tol = config.gap_tol;
    opts.node_cap = config.node_cap;
    BnbResult r = branch_and_bound(spec, opts);
    if (!r.proven) out.warnings.push_back("node cap reached before the optimality gap closed");
    out.estimator = r.estimator;
    out.bnb = std::move(r);
  } else {
    throw InvalidArgument("unknown method '" + m + "'");
  }
  out.value = out.estimator.objective;
  return out;
}

}  // namespace sridge
