#include "sparse_ridge/exact.hpp"

#include "sparse_ridge/combinations.hpp"
#include "sparse_ridge/errors.hpp"
#include "sparse_ridge/greedy.hpp"
#include "sparse_ridge/mic_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

namespace sridge {

SparseEstimator brute_force(const ProblemSpec& spec, BruteForceOptions opts) {
  const Index p = spec.p();
  const Index k = spec.k();
  const std::uint64_t count = binomial(static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(k));
  if (count > opts.enumeration_cap) {
    throw CapExceeded("C(" + std::to_string(p) + ", " + std::to_string(k) + ") subsets exceed the enumeration cap");
  }
  // f(S) = (||y||^2 - c_S^T (G_SS + n lambda I)^{-1} c_S) / n
  const Matrix gram = spec.x().transpose() * spec.x();
  const Vector xty = spec.x().transpose() * spec.y();
  const double yy = spec.y().squaredNorm();
  const double n = static_cast<double>(spec.n());

  Matrix sub(k, k);
  Vector rhs(k);
  double best = std::numeric_limits<double>::infinity();
  Support best_support;
  for_each_combination(p, k, [&](const std::vector<Index>& s) {
    for (Index a = 0; a < k; ++a) {
      rhs(a) = xty(s[static_cast<std::size_t>(a)]);
      for (Index b = 0; b <= a; ++b) sub(a, b) = gram(s[static_cast<std::size_t>(a)], s[static_cast<std::size_t>(b)]);
      sub(a, a) += spec.n_lambda();
    }
    Eigen::LLT<Matrix> llt(sub);
    const double value = (yy - rhs.dot(llt.solve(rhs))) / n;
    if (best_support.empty() || value < best - 1e-12 * std::max(1.0, std::abs(best))) {
      best = value;
      best_support.assign(s.begin(), s.end());
    }
    return true;
  });
  return restricted_estimator(spec, best_support);
}

namespace {

struct QueuedNode {
  BnbNode node;
  Vector warm;  // parent relaxation restricted to this node's free set
  std::int64_t seq = 0;
};

struct NodeOrder {
  bool operator()(const QueuedNode& a, const QueuedNode& b) const {
    if (a.node.lower_bound != b.node.lower_bound) return a.node.lower_bound > b.node.lower_bound;
    if (a.node.depth != b.node.depth) return a.node.depth > b.node.depth;
    return a.seq > b.seq;
  }
};

Support merged(const Support& a, const Support& b) {
  Support out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Support free_coordinates(Index p, const BnbNode& node) {
  std::vector<char> fixed(static_cast<std::size_t>(p), 0);
  for (Index i : node.fixed_one) fixed[static_cast<std::size_t>(i)] = 1;
  for (Index i : node.fixed_zero) fixed[static_cast<std::size_t>(i)] = 1;
  Support out;
  for (Index i = 0; i < p; ++i) {
    if (!fixed[static_cast<std::size_t>(i)]) out.push_back(i);
  }
  return out;
}

Support with(Support s, Index i) {
  s.insert(std::upper_bound(s.begin(), s.end(), i), i);
  return s;
}

}  // namespace

BnbResult branch_and_bound(const ProblemSpec& spec, BnbOptions opts, const BnbObserver& observer) {
  if (!(opts.gap_tol >= 0.0)) throw InvalidArgument("gap tolerance must be nonnegative");
  if (opts.node_cap < 1) throw InvalidArgument("node cap must be positive");
  const Index p = spec.p();
  const Index k = spec.k();

  // Incumbent seeded from forward selection.
  Support incumbent = [&] {
    const GreedyResult g = greedy_select(spec);
    return g.estimator.support;
  }();
  double incumbent_value = mic_value(spec, incumbent);
  auto offer = [&](const Support& s) {
    const double v = mic_value(spec, s);
    if (v < incumbent_value) {
      incumbent_value = v;
      incumbent = s;
    }
  };

  BnbResult result;
  std::priority_queue<QueuedNode, std::vector<QueuedNode>, NodeOrder> open;
  std::int64_t seq = 0;
  open.push({BnbNode{}, Vector(), seq++});
  bool root = true;
  const double prune_factor = 1.0 - 1e-12;

  while (!open.empty()) {
    if (open.top().node.lower_bound >= incumbent_value * (1.0 - opts.gap_tol)) break;
    if (result.nodes >= opts.node_cap) break;
    QueuedNode item = open.top();
    open.pop();
    ++result.nodes;
    BnbNode& node = item.node;

    const Support free = free_coordinates(p, node);
    const Index budget = k - static_cast<Index>(node.fixed_one.size());
    if (budget == 0 || static_cast<Index>(free.size()) <= budget) {
      // Leaf: monotonicity makes "take every free coordinate" optimal.
      const Support s = budget == 0 ? node.fixed_one : merged(node.fixed_one, free);
      node.lower_bound = std::max(node.lower_bound, mic_value(spec, s));
      if (root) result.root_bound = node.lower_bound;
      root = false;
      if (observer) observer(node);
      offer(s);
      continue;
    }

    const MicModel model(spec, node.fixed_one, free);
    std::optional<Vector> warm;
    if (item.warm.size() == static_cast<Index>(free.size())) warm = item.warm;
    const RelaxationSolution sol =
        solve_mic_relaxation(model, static_cast<double>(budget), opts.relaxation, warm);
    const double certified = std::min(sol.value, mic_lower_bound(model, static_cast<double>(budget), sol.z));
    node.lower_bound = std::max(node.lower_bound, certified);
    if (root) result.root_bound = sol.value;
    root = false;
    if (observer) observer(node);

    // Rounding: keep the budget largest relaxed coordinates.
    std::vector<Index> order(free.size());
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return sol.z(a) > sol.z(b); });
    Support rounded = node.fixed_one;
    for (Index t = 0; t < budget; ++t) rounded = with(rounded, free[static_cast<std::size_t>(order[static_cast<std::size_t>(t)])]);
    offer(rounded);

    if (node.lower_bound >= incumbent_value * prune_factor) continue;

    Index branch = -1;
    double best_dist = 1.0;
    for (Index t = 0; t < sol.z.size(); ++t) {
      const double zt = std::clamp(sol.z(t), 0.0, 1.0);
      if (zt <= 1e-9 || zt >= 1.0 - 1e-9) continue;
      const double dist = std::abs(zt - 0.5);
      if (dist < best_dist) {
        best_dist = dist;
        branch = t;
      }
    }
    if (branch < 0) continue;  // integral relaxation: the rounding above is optimal here

    const Index feature = free[static_cast<std::size_t>(branch)];
    auto child_warm = [&](Index skip) {
      Vector w(sol.z.size() - 1);
      for (Index t = 0, c = 0; t < sol.z.size(); ++t) {
        if (t != skip) w(c++) = sol.z(t);
      }
      return w;
    };
    BnbNode one{with(node.fixed_one, feature), node.fixed_zero, node.lower_bound, node.depth + 1};
    BnbNode zero{node.fixed_one, with(node.fixed_zero, feature), node.lower_bound, node.depth + 1};
    open.push({std::move(one), child_warm(branch), seq++});
    open.push({std::move(zero), child_warm(branch), seq++});
  }

  double lower = incumbent_value;
  if (!open.empty()) lower = std::min(lower, open.top().node.lower_bound);
  result.lower_bound = lower;
  result.value = incumbent_value;
  result.gap = incumbent_value > 0.0 ? std::max(0.0, (incumbent_value - result.lower_bound) / incumbent_value) : 0.0;
  result.proven = result.gap <= opts.gap_tol;
  result.estimator = restricted_estimator(spec, incumbent);
  return result;
}

}  // namespace sridge
