#pragma once

// Exact solvers: exhaustive enumeration of size-k supports, and best-first
// branch and bound on the binary selection vector using the continuous
// relaxation of f(z) as node bound.

#include "sparse_ridge/model.hpp"
#include "sparse_ridge/relaxation.hpp"

#include <cstdint>
#include <functional>

namespace sridge {

struct BruteForceOptions {
  std::uint64_t enumeration_cap = 2'000'000;
};

/// Best size-k support (f is monotone, so smaller supports never win).
/// Ties keep the lexicographically smallest support. Throws CapExceeded when
/// C(p, k) exceeds the cap.
SparseEstimator brute_force(const ProblemSpec& spec, BruteForceOptions opts = {});

struct BnbNode {
  Support fixed_one;
  Support fixed_zero;
  double lower_bound = 0.0;
  int depth = 0;
};

struct BnbOptions {
  double gap_tol = 1e-6;  // relative
  std::int64_t node_cap = 100'000;
  V4Options relaxation{1e-9, 20000};
};

struct BnbResult {
  SparseEstimator estimator;
  double value = 0.0;
  double lower_bound = 0.0;
  double gap = 0.0;
  std::int64_t nodes = 0;
  double root_bound = 0.0;  // relaxation value at the root
  bool proven = false;      // gap <= gap_tol on exit
};

/// Called after each node's bound is computed (before pruning).
using BnbObserver = std::function<void(const BnbNode&)>;

BnbResult branch_and_bound(const ProblemSpec& spec, BnbOptions opts = {}, const BnbObserver& observer = {});

}  // namespace sridge
