#include "sparse_ridge/bench.hpp"

#include "sparse_ridge/errors.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <memory>
#include <thread>

namespace sridge {

namespace {

std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<BenchCell> expand_cells(const BenchConfig& c) {
  std::vector<BenchCell> cells;
  for (Index p : c.ps) {
    for (Index n : c.ns) {
      for (Index k : c.ks) cells.push_back({p, n, k});
    }
  }
  return cells;
}

}  // namespace

std::uint64_t bench_dataset_seed(std::uint64_t base, const BenchCell& cell, int rep) {
  std::uint64_t h = mix(base);
  h = mix(h ^ static_cast<std::uint64_t>(cell.p));
  h = mix(h ^ static_cast<std::uint64_t>(cell.n));
  h = mix(h ^ static_cast<std::uint64_t>(cell.k));
  return mix(h ^ static_cast<std::uint64_t>(rep));
}

SyntheticConfig bench_synthetic_config(const BenchConfig& config, const BenchCell& cell, int rep) {
  SyntheticConfig s;
  s.n = cell.n;
  s.p = cell.p;
  s.k_true = cell.k;
  s.rho = config.rho;
  s.snr = config.snr;
  s.coef_low = config.coef_low;
  s.coef_high = config.coef_high;
  s.resample_small = config.resample_small;
  s.seed = bench_dataset_seed(config.seed, cell, rep);
  return s;
}

int default_worker_count() {
  if (const char* env = std::getenv("SRIDGE_WORKERS")) {
    const int w = std::atoi(env);
    if (w > 0) return w;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

BenchReport run_benchmark(const BenchConfig& config) {
  const std::vector<BenchCell> cells = expand_cells(config);
  if (cells.empty()) throw InvalidArgument("benchmark grid is empty");
  if (config.methods.empty()) throw InvalidArgument("benchmark has no methods");
  if (config.reps < 1) throw InvalidArgument("reps must be at least 1");
  for (const auto& m : config.methods) {
    if (!is_solver(m.method)) throw InvalidArgument("unknown method '" + m.method + "'");
  }
  for (const auto& cell : cells) {
    if (cell.k < 1 || cell.k > std::min(cell.n, cell.p)) {
      throw InvalidArgument("cell k must lie in [1, min(n, p)]");
    }
  }

  const std::size_t n_methods = config.methods.size();
  const std::size_t n_tasks = cells.size() * static_cast<std::size_t>(config.reps);
  int workers = config.serial_timing ? 1 : (config.workers > 0 ? config.workers : default_worker_count());
  workers = std::max(1, std::min<int>(workers, static_cast<int>(n_tasks)));

  std::vector<BenchRecord> records(n_tasks * n_methods);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t task = next++; task < n_tasks; task = next++) {
      const BenchCell& cell = cells[task / static_cast<std::size_t>(config.reps)];
      const int rep = static_cast<int>(task % static_cast<std::size_t>(config.reps));
      const SyntheticConfig sc = bench_synthetic_config(config, cell, rep);
      const SyntheticData data = generate_synthetic(sc);
      const ProblemSpec spec(std::make_shared<const Dataset>(data.dataset), config.lambda, cell.k);
      for (std::size_t m = 0; m < n_methods; ++m) {
        BenchRecord& r = records[task * n_methods + m];
        r.method = config.methods[m].method;
        r.cell = cell;
        r.rep = rep;
        r.data_seed = sc.seed;
        r.parallelism = workers;
        const auto start = std::chrono::steady_clock::now();
        try {
          const SolverOutcome out = run_solver(spec, config.methods[m]);
          r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
          r.objective = out.value;
          r.false_alarm = false_alarm_rate(out.estimator.support, data.true_support, cell.k);
        } catch (const std::exception& e) {
          r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
          r.failed = true;
          r.error = e.what();
        }
        r.timed_out = r.seconds > config.time_budget_s;
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  BenchReport report;
  report.records = std::move(records);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (std::size_t m = 0; m < n_methods; ++m) {
      BenchAggregate agg;
      agg.method = config.methods[m].method;
      agg.cell = cells[c];
      for (int rep = 0; rep < config.reps; ++rep) {
        const std::size_t task = c * static_cast<std::size_t>(config.reps) + static_cast<std::size_t>(rep);
        const BenchRecord& r = report.records[task * n_methods + m];
        if (r.failed || r.timed_out) continue;
        ++agg.count;
        agg.mean_objective += r.objective;
        agg.mean_seconds += r.seconds;
        agg.mean_false_alarm += r.false_alarm;
      }
      if (agg.count > 0) {
        agg.mean_objective /= agg.count;
        agg.mean_seconds /= agg.count;
        agg.mean_false_alarm /= agg.count;
      }
      report.aggregates.push_back(agg);
    }
  }
  return report;
}

}  // namespace sridge
