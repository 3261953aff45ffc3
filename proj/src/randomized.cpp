#include "sparse_ridge/randomized.hpp"

#include "sparse_ridge/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sridge {

namespace {

constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

std::uint64_t splitmix_finalize(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Trims an over-full support to k features by dropping the smallest |beta|
// of the restricted fit; ties drop the higher index first.
SparseEstimator repair_support(const ProblemSpec& spec, const Support& s) {
  const SparseEstimator full = fit_support(spec, s);
  std::vector<Index> order(s.begin(), s.end());
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return std::abs(full.beta(a)) > std::abs(full.beta(b)); });
  order.resize(static_cast<std::size_t>(spec.k()));
  return restricted_estimator(spec, order);
}

}  // namespace

std::uint64_t CounterRng::at(std::uint64_t i) const { return splitmix_finalize(key_ + (i + 1) * kGoldenGamma); }

double CounterRng::unit_at(std::uint64_t i) const {
  return static_cast<double>((at(i) >> 11) + 1) * 0x1.0p-53;
}

RoundingOutcome randomized_round(const Vector& zhat, std::uint64_t seed) {
  if ((zhat.array() < -1e-9).any() || (zhat.array() > 1.0 + 1e-9).any() || !zhat.allFinite()) {
    throw InvalidArgument("relaxation vector must lie in [0, 1]");
  }
  const CounterRng rng(seed);
  RoundingOutcome out;
  out.seed = seed;
  out.z_tilde = Vector::Zero(zhat.size());
  for (Index i = 0; i < zhat.size(); ++i) {
    if (rng.unit_at(static_cast<std::uint64_t>(i)) <= zhat(i)) {
      out.z_tilde(i) = 1.0;
      out.support.push_back(i);
    }
  }
  out.cardinality = static_cast<Index>(out.support.size());
  return out;
}

double cardinality_bound(Index k, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
  if (k < 1) throw InvalidArgument("k must be positive");
  const double kd = static_cast<double>(k);
  return (1.0 + std::sqrt(3.0 * std::log(2.0 / alpha) / kd)) * kd;
}

RandomizedResult randomized_solve(const ProblemSpec& spec, const Vector& zhat, RandomizedOptions opts) {
  if (opts.trials < 1) throw InvalidArgument("trials must be at least 1");
  if (zhat.size() != spec.p()) throw InvalidArgument("relaxation vector has wrong length");
  const double bound = cardinality_bound(spec.k(), opts.alpha);

  RandomizedResult result;
  double best_score = 0.0;
  double card_sum = 0.0;
  Index exceed = 0;
  for (Index t = 0; t < opts.trials; ++t) {
    RoundingOutcome draw = randomized_round(zhat, opts.seed ^ static_cast<std::uint64_t>(t));
    draw.value = mic_value(spec, draw.support);
    card_sum += static_cast<double>(draw.cardinality);
    if (static_cast<double>(draw.cardinality) > bound) ++exceed;
    double score = draw.value;
    if (opts.repair && draw.cardinality > spec.k()) {
      draw.repaired = repair_support(spec, draw.support);
      score = draw.repaired->objective;
    }
    if (t == 0 || score < best_score) {
      best_score = score;
      result.best = std::move(draw);
      result.best_trial = t;
    }
  }

  const RoundingOutcome& best = result.best;
  if (best.repaired) {
    result.estimator = *best.repaired;
  } else {
    result.estimator = fit_support(spec, best.support);
  }
  result.stats.trials = opts.trials;
  result.stats.best_value = best_score;
  result.stats.best_support = best.repaired ? best.repaired->support : best.support;
  result.stats.mean_cardinality = card_sum / static_cast<double>(opts.trials);
  result.stats.p_exceed_bound = static_cast<double>(exceed) / static_cast<double>(opts.trials);
  result.stats.alpha = opts.alpha;
  return result;
}

}  // namespace sridge
