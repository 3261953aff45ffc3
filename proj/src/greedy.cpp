#include "sparse_ridge/greedy.hpp"

#include "sparse_ridge/errors.hpp"
#include "sparse_ridge/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sridge {

namespace {
constexpr double kTieTolerance = 1e-12;
constexpr double kMinDenominator = 0.5;
}  // namespace

GreedyState::GreedyState(const ProblemSpec& spec, Support candidates) : spec_(spec) {
  const Index p = spec.p();
  if (candidates.empty()) {
    candidates.resize(static_cast<std::size_t>(p));
    for (Index j = 0; j < p; ++j) candidates[static_cast<std::size_t>(j)] = j;
  }
  candidates_ = normalize_support(std::move(candidates), p);
  slot_of_.assign(static_cast<std::size_t>(p), -1);
  for (std::size_t s = 0; s < candidates_.size(); ++s) {
    slot_of_[static_cast<std::size_t>(candidates_[s])] = static_cast<Index>(s);
  }
  selected_mask_.assign(candidates_.size(), 0);

  const double nl = spec.n_lambda();
  const Index c = static_cast<Index>(candidates_.size());
  inv_products_.resize(spec.n(), c);
  for (Index s = 0; s < c; ++s) inv_products_.col(s) = spec.x().col(candidates_[s]) / nl;
  quad_terms_.resize(c);
  cross_terms_.resize(c);
  for (Index s = 0; s < c; ++s) {
    const auto col = spec.x().col(candidates_[s]);
    quad_terms_(s) = col.squaredNorm() / nl;
    cross_terms_(s) = col.dot(spec.y()) / nl;
  }
  inv_y_ = spec.y() / nl;
  current_value_ = spec.y().squaredNorm() / static_cast<double>(spec.n());
}

Index GreedyState::slot(Index j) const {
  if (j < 0 || j >= static_cast<Index>(slot_of_.size())) return -1;
  return slot_of_[static_cast<std::size_t>(j)];
}

bool GreedyState::is_selected(Index j) const {
  const Index s = slot(j);
  return s >= 0 && selected_mask_[static_cast<std::size_t>(s)] != 0;
}

double GreedyState::gain(Index j) const {
  const Index s = slot(j);
  if (s < 0) throw InvalidArgument("feature " + std::to_string(j) + " is not a candidate");
  if (selected_mask_[static_cast<std::size_t>(s)]) {
    throw InvalidArgument("feature " + std::to_string(j) + " is already selected");
  }
  const double denom = 1.0 + quad_terms_(s);
  if (denom < kMinDenominator) throw NumericalFailure("Sherman-Morrison denominator fell below 0.5");
  const double c = cross_terms_(s);
  return -spec_.lambda() * c * c / denom;
}

Index GreedyState::best_candidate() const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < candidates_.size(); ++s) {
    if (!selected_mask_[s]) best = std::min(best, gain(candidates_[s]));
  }
  if (!std::isfinite(best)) return -1;
  for (std::size_t s = 0; s < candidates_.size(); ++s) {
    if (!selected_mask_[s] && gain(candidates_[s]) <= best + kTieTolerance) return candidates_[s];
  }
  return -1;
}

void GreedyState::add(Index j) {
  const double delta = gain(j);  // validates j
  const Index s = slot(j);
  const double denom = 1.0 + quad_terms_(s);
  const double cross_j = cross_terms_(s);
  const Vector w = inv_products_.col(s);

  const auto& k = kernels::table(kernels::active_isa());
  const std::size_t n = static_cast<std::size_t>(inv_products_.rows());
  const std::size_t c = static_cast<std::size_t>(inv_products_.cols());

  // t_i = x_i^T A^{-1} x_j for every candidate column i.
  Vector t(static_cast<Index>(c));
  {
    // X columns of the candidates; contiguous when all p columns are candidates.
    const Matrix& x = spec_.x();
    if (c == static_cast<std::size_t>(x.cols())) {
      k.gemv_t(x.data(), n, n, c, w.data(), t.data());
    } else {
      for (std::size_t q = 0; q < c; ++q) {
        t(static_cast<Index>(q)) = k.dot(x.col(candidates_[q]).data(), w.data(), n);
      }
    }
  }
  const Vector coef = t / denom;
  k.rank1_columns(inv_products_.data(), n, n, c, w.data(), coef.data());
  quad_terms_ -= t.cwiseProduct(coef);
  cross_terms_ -= cross_j * coef;
  k.axpy(-cross_j / denom, w.data(), inv_y_.data(), n);
  current_value_ += delta;

  selected_mask_[static_cast<std::size_t>(s)] = 1;
  selected_.push_back(j);
}

double marginal_gain(const GreedyState& state, Index j) { return state.gain(j); }

GreedyResult greedy_over(const ProblemSpec& spec, const Support& candidates, const GreedyObserver& observer) {
  GreedyState state(spec, candidates);
  GreedyResult result;
  const Index rounds = std::min<Index>(spec.k(), static_cast<Index>(state.candidates().size()));
  for (Index it = 0; it < rounds; ++it) {
    const Index j = state.best_candidate();
    const double g = state.gain(j);
    state.add(j);
    GreedyStep step;
    step.chosen = j;
    step.gain = g;
    step.value = state.current_value();
    step.zero_gain = -g <= kTieTolerance * std::max(1.0, step.value);
    result.trace.push_back(step);
    if (observer) observer(state);
  }
  result.value = state.current_value();
  result.estimator = fit_support(spec, Support(state.selected().begin(), state.selected().end()));
  return result;
}

GreedyResult greedy_select(const ProblemSpec& spec, const GreedyObserver& observer) {
  return greedy_over(spec, {}, observer);
}

GreedyResult restricted_greedy(const ProblemSpec& spec, const Vector& zhat, double delta) {
  if (!(delta > 0.0)) throw InvalidArgument("delta must be positive");
  if (zhat.size() != spec.p()) throw InvalidArgument("relaxation vector has wrong length");
  Support cand;
  for (Index i = 0; i < zhat.size(); ++i) {
    if (zhat(i) >= delta) cand.push_back(i);
  }
  if (cand.empty()) {
    GreedyResult r;
    r.estimator = fit_support(spec, {});
    r.value = r.estimator.objective;
    r.warnings.push_back("no coordinate of the relaxation reaches delta; returning the zero estimator");
    return r;
  }
  GreedyResult r = greedy_over(spec, cand);
  if (static_cast<Index>(cand.size()) < spec.k()) {
    r.warnings.push_back("candidate set has " + std::to_string(cand.size()) +
                         " features, fewer than k = " + std::to_string(spec.k()));
  }
  return r;
}

double greedy_ratio_bound(const ProblemSpec& spec, const SpectralStats& stats) {
  const Index p = spec.p();
  const Index k = spec.k();
  if (p < k) throw InvalidArgument("ratio bound requires p >= k");
  const double nl = spec.n_lambda();
  const double t1 = stats.at(1);
  const double tk = stats.at(k);
  const double lead = (nl + tk) / nl;
  const double shrink = nl * nl * stats.underline_theta / ((nl + t1) * (nl + tk) * (nl + tk)) *
                        std::log(static_cast<double>(p + 1) / static_cast<double>(p + 1 - k));
  return lead * (1.0 - shrink);
}

double greedy_distance_bound(const ProblemSpec& spec, const SpectralStats& stats, const Support& greedy_support,
                             const Support& optimal_support, double v_star) {
  const Support g = normalize_support(greedy_support, spec.p());
  const Support o = normalize_support(optimal_support, spec.p());
  Support only_greedy, uni;
  std::set_difference(g.begin(), g.end(), o.begin(), o.end(), std::back_inserter(only_greedy));
  std::set_union(g.begin(), g.end(), o.begin(), o.end(), std::back_inserter(uni));

  double sigma_min = 0.0;
  if (!uni.empty()) {
    Matrix xu(spec.n(), static_cast<Index>(uni.size()));
    for (std::size_t j = 0; j < uni.size(); ++j) xu.col(static_cast<Index>(j)) = spec.x().col(uni[j]);
    Eigen::SelfAdjointEigenSolver<Matrix> eig(xu.transpose() * xu, Eigen::EigenvaluesOnly);
    sigma_min = std::max(0.0, eig.eigenvalues()(0));
  }
  const double n = static_cast<double>(spec.n());
  const double denom = spec.n_lambda() + sigma_min;
  const double nu = greedy_ratio_bound(spec, stats) - 1.0;
  const double theta_m = stats.at(static_cast<Index>(only_greedy.size()));
  return std::sqrt(4.0 * n * theta_m * v_star) / denom + std::sqrt(n * std::max(nu, 0.0) * v_star / denom);
}

}  // namespace sridge
