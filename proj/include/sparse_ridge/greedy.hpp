#pragma once

// Forward selection on the subset objective f(S) = lambda y^T A_S^{-1} y with
// A_S = n lambda I + sum_{i in S} x_i x_i^T. The inverse is never formed;
// instead A_S^{-1} x_j, x_j^T A_S^{-1} x_j and y^T A_S^{-1} x_j are kept for
// every candidate column and refreshed with one Sherman-Morrison step per
// selection, so each iteration costs O(n p) time and the state O(n p) memory.

#include "sparse_ridge/model.hpp"

#include <functional>
#include <string>
#include <vector>

namespace sridge {

class GreedyState {
 public:
  /// Fresh state with S empty over the given candidate columns
  /// (all p columns when `candidates` is empty).
  explicit GreedyState(const ProblemSpec& spec, Support candidates = {});

  /// Change in f from adding feature j:
  /// -lambda (y^T A^{-1} x_j)^2 / (1 + x_j^T A^{-1} x_j).
  /// Throws InvalidArgument if j is selected or not a candidate.
  double gain(Index j) const;

  /// Adds feature j and applies the rank-one inverse update to all columns.
  void add(Index j);

  /// Lowest-index candidate whose gain is within 1e-12 of the minimum,
  /// or -1 when every candidate is selected.
  Index best_candidate() const;

  bool is_selected(Index j) const;
  const std::vector<Index>& selected() const { return selected_; }
  const Support& candidates() const { return candidates_; }
  double current_value() const { return current_value_; }

  // Tracked quantities, one column/entry per candidate (candidate order).
  const Matrix& inv_products() const { return inv_products_; }
  const Vector& quad_terms() const { return quad_terms_; }
  const Vector& cross_terms() const { return cross_terms_; }
  const Vector& inv_y() const { return inv_y_; }

  /// Position of feature j in candidates(), or -1.
  Index slot(Index j) const;

 private:
  ProblemSpec spec_;
  Support candidates_;
  std::vector<Index> slot_of_;
  std::vector<char> selected_mask_;
  std::vector<Index> selected_;
  Matrix inv_products_;
  Vector quad_terms_;
  Vector cross_terms_;
  Vector inv_y_;
  double current_value_ = 0.0;
};

double marginal_gain(const GreedyState& state, Index j);

struct GreedyStep {
  Index chosen = -1;
  double gain = 0.0;
  double value = 0.0;
  bool zero_gain = false;
};

using GreedyTrace = std::vector<GreedyStep>;

struct GreedyResult {
  SparseEstimator estimator;  // closed-form refit on the selected support
  GreedyTrace trace;
  double value = 0.0;  // lambda y^T A_S^{-1} y from the tracked state
  std::vector<std::string> warnings;
};

using GreedyObserver = std::function<void(const GreedyState&)>;

/// Runs min(k, |candidates|) selection rounds. The observer, if given, sees
/// the state after every round.
GreedyResult greedy_over(const ProblemSpec& spec, const Support& candidates,
                         const GreedyObserver& observer = {});

GreedyResult greedy_select(const ProblemSpec& spec, const GreedyObserver& observer = {});

/// Greedy restricted to C = {i : zhat_i >= delta}.
GreedyResult restricted_greedy(const ProblemSpec& spec, const Vector& zhat, double delta = 0.01);

/// Multiplicative factor B with v* <= v^G <= B v*.
double greedy_ratio_bound(const ProblemSpec& spec, const SpectralStats& stats);

/// Upper bound on ||beta^G - beta*||_2 given both supports and v*.
double greedy_distance_bound(const ProblemSpec& spec, const SpectralStats& stats,
                             const Support& greedy_support, const Support& optimal_support,
                             double v_star);

}  // namespace sridge
