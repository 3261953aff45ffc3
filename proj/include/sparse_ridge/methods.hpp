#pragma once

// Name-based dispatch over the subset solvers, shared by the CLI, the
// lambda-selection loop and the benchmark driver.

#include "sparse_ridge/exact.hpp"
#include "sparse_ridge/greedy.hpp"
#include "sparse_ridge/heuristic.hpp"
#include "sparse_ridge/model.hpp"
#include "sparse_ridge/randomized.hpp"
#include "sparse_ridge/relaxation.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sridge {

struct SolverConfig {
  std::string method = "greedy";  // greedy|restricted|randomized|heuristic|brute|bnb
  double delta = 0.01;            // restricted greedy threshold
  Index trials = 64;              // randomized rounding
  std::uint64_t seed = 0;
  bool repair = true;
  double alpha = 0.05;
  double delta_hat = 1e-4;  // bisection tolerance
  double gap_tol = 1e-6;
  std::int64_t node_cap = 100'000;
};

struct SolverOutcome {
  std::string method;
  SparseEstimator estimator;  // always feasible (|support| <= k)
  double value = 0.0;         // objective of the returned estimator
  std::vector<std::string> warnings;

  std::optional<GreedyTrace> greedy_trace;
  std::optional<RelaxationSolution> relaxation;
  std::optional<RandomizedResult> randomized;
  std::optional<BisectionResult> bisection;
  std::optional<BnbResult> bnb;
};

const std::vector<std::string>& solver_names();
bool is_solver(const std::string& name);

/// Throws InvalidArgument for unknown method names.
SolverOutcome run_solver(const ProblemSpec& spec, const SolverConfig& config);

}  // namespace sridge
