#pragma once

// Repeated-trial benchmark over a grid of (p, n, k) cells and a list of
// solvers. Each (cell, repetition) draws one synthetic dataset from a seed
// that depends only on the base seed, the cell and the repetition, so every
// solver sees identical data and any record can be regenerated on its own.

#include "sparse_ridge/methods.hpp"
#include "sparse_ridge/synthetic.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sridge {

struct BenchCell {
  Index p = 0;
  Index n = 0;
  Index k = 0;
};

struct BenchConfig {
  std::vector<Index> ps{200};
  std::vector<Index> ns{100};
  std::vector<Index> ks{10};
  std::vector<SolverConfig> methods{SolverConfig{}};
  int reps = 10;
  std::uint64_t seed = 0;
  double lambda = 0.08;
  double rho = 0.5;
  double snr = 9.0;
  double coef_low = -3.0;
  double coef_high = 3.0;
  bool resample_small = true;
  double time_budget_s = 600.0;  // per solver call; exceeding it marks the record
  int workers = 0;               // 0: SRIDGE_WORKERS or hardware concurrency
  bool serial_timing = false;    // force one worker so timings do not interfere
};

struct BenchRecord {
  std::string method;
  BenchCell cell;
  int rep = 0;
  std::uint64_t data_seed = 0;
  double objective = 0.0;
  double seconds = 0.0;
  double false_alarm = 0.0;
  bool timed_out = false;
  bool failed = false;
  std::string error;
  int parallelism = 1;
};

struct BenchAggregate {
  std::string method;
  BenchCell cell;
  int count = 0;  // successful records
  double mean_objective = 0.0;
  double mean_seconds = 0.0;
  double mean_false_alarm = 0.0;
};

struct BenchReport {
  std::vector<BenchRecord> records;  // ordered by (cell, rep, method)
  std::vector<BenchAggregate> aggregates;
};

std::uint64_t bench_dataset_seed(std::uint64_t base, const BenchCell& cell, int rep);

/// The synthetic config used for a (cell, rep) pair.
SyntheticConfig bench_synthetic_config(const BenchConfig& config, const BenchCell& cell, int rep);

/// Worker count from SRIDGE_WORKERS, falling back to hardware concurrency.
int default_worker_count();

/// Throws InvalidArgument for an empty grid, unknown methods or reps < 1.
/// Solver failures are captured per record.
BenchReport run_benchmark(const BenchConfig& config);

}  // namespace sridge
