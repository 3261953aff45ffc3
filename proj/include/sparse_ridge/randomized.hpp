#pragma once

// Independent Bernoulli rounding of a fractional relaxation solution, with a
// multi-trial driver and the cardinality diagnostics of the bi-criteria
// guarantee.
//
// Randomness comes from SplitMix64 used as a counter-based generator: draw i
// of a stream with key K is mix(K + (i + 1) * golden_gamma). Trial t of a run
// seeded with s uses key s ^ t, so any trial can be replayed on its own and
// results do not depend on thread scheduling or platform.

#include "sparse_ridge/model.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace sridge {

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  /// The i-th 64-bit output of this stream.
  std::uint64_t at(std::uint64_t i) const;

  /// Uniform on (0, 1] with 53 bits of resolution.
  double unit_at(std::uint64_t i) const;

 private:
  std::uint64_t key_;
};

struct RoundingOutcome {
  Support support;
  Vector z_tilde;
  Index cardinality = 0;
  double value = 0.0;  // f(z_tilde); filled by randomized_solve
  std::uint64_t seed = 0;
  // Present when repair was requested and the draw exceeded k.
  std::optional<SparseEstimator> repaired;
};

/// Includes i iff U_i <= zhat_i. Throws InvalidArgument when zhat leaves
/// [0, 1] by more than 1e-9.
RoundingOutcome randomized_round(const Vector& zhat, std::uint64_t seed);

struct RandomizedStats {
  Index trials = 0;
  double best_value = 0.0;
  Support best_support;
  double mean_cardinality = 0.0;
  double p_exceed_bound = 0.0;  // fraction of draws above cardinality_bound(k, alpha)
  double alpha = 0.05;
};

struct RandomizedResult {
  RoundingOutcome best;
  Index best_trial = 0;  // replay with randomized_round(zhat, seed ^ best_trial)
  SparseEstimator estimator;  // feasible fit for the best trial when repair is on
  RandomizedStats stats;
};

struct RandomizedOptions {
  Index trials = 64;
  std::uint64_t seed = 0;
  bool repair = true;
  double alpha = 0.05;
};

/// Runs the trials and keeps the best. With repair on, draws larger than k
/// are trimmed by dropping the smallest |beta| of the restricted fit and the
/// comparison uses the repaired (feasible) objective; otherwise the raw f
/// value is compared. Ties go to the lowest trial index.
RandomizedResult randomized_solve(const ProblemSpec& spec, const Vector& zhat, RandomizedOptions opts = {});

/// (1 + sqrt(3 log(2/alpha) / k)) k. Throws InvalidArgument unless 0 < alpha < 1.
double cardinality_bound(Index k, double alpha);

}  // namespace sridge
