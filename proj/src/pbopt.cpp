#include "circles/pbopt.hpp"

#include <cmath>
#include <stdexcept>

#include "circles/maxflow.hpp"

namespace circles {

namespace {

std::uint64_t pair_key(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

void check_finite(const PairwiseEnergy& energy) {
  for (const auto& u : energy.unary())
    if (!std::isfinite(u[0]) || !std::isfinite(u[1]))
      throw std::runtime_error("non-finite unary energy");
  for (const auto& p : energy.pairs())
    for (const auto& row : p.table)
      for (double v : row)
        if (!std::isfinite(v)) throw std::runtime_error("non-finite pairwise energy");
}

}  // namespace

PairwiseEnergy::PairwiseEnergy(int nodes)
    : unary_(static_cast<std::size_t>(nodes), {0.0, 0.0}), incident_(static_cast<std::size_t>(nodes)) {
  if (nodes < 1) throw std::runtime_error("energy needs at least one node");
}

void PairwiseEnergy::add_unary(int v, double e0, double e1) {
  unary_[static_cast<std::size_t>(v)][0] += e0;
  unary_[static_cast<std::size_t>(v)][1] += e1;
}

void PairwiseEnergy::add_pairwise(int a, int b, double e00, double e01, double e10, double e11) {
  if (a == b) throw std::runtime_error("pairwise term needs two distinct nodes");
  if (a > b) {
    std::swap(a, b);
    std::swap(e01, e10);
  }
  auto [it, fresh] = pairIndex_.emplace(pair_key(a, b), static_cast<int>(pairs_.size()));
  if (fresh) {
    pairs_.push_back({a, b, {{{0.0, 0.0}, {0.0, 0.0}}}});
    incident_[static_cast<std::size_t>(a)].push_back(it->second);
    incident_[static_cast<std::size_t>(b)].push_back(it->second);
  }
  auto& t = pairs_[static_cast<std::size_t>(it->second)].table;
  t[0][0] += e00;
  t[0][1] += e01;
  t[1][0] += e10;
  t[1][1] += e11;
}

double energy_of(const PairwiseEnergy& energy, const Labeling& labeling) {
  if (static_cast<int>(labeling.values.size()) != energy.node_count())
    throw std::runtime_error("labeling size mismatch");
  if (!labeling.fully_labeled()) throw std::runtime_error("labeling incomplete");
  double sum = 0.0;
  for (int v = 0; v < energy.node_count(); ++v)
    sum += energy.unary()[static_cast<std::size_t>(v)][labeling.values[static_cast<std::size_t>(v)]];
  for (const auto& p : energy.pairs())
    sum += p.table[labeling.values[static_cast<std::size_t>(p.a)]][labeling.values[static_cast<std::size_t>(p.b)]];
  return sum;
}

Labeling solve_persistent(const PairwiseEnergy& energy) {
  check_finite(energy);
  const int n = energy.node_count();
  const int source = 2 * n;
  const int sink = 2 * n + 1;
  MaxFlow flow(2 * n + 2);

  // Cut convention: a node on the sink side takes the value 1. The doubled
  // graph carries each term twice at half weight, once on the variables and
  // once (complemented) on their mirrors, which keeps every piece submodular.
  auto add_lin = [&](int v, double c) {
    if (c > 0)
      flow.add_edge(source, v, c);
    else if (c < 0)
      flow.add_edge(v, sink, -c);
  };
  // lam * z_u * z_v with lam <= 0.
  auto add_quad_sub = [&](int u, int v, double lam) {
    add_lin(v, lam);
    flow.add_edge(u, v, -lam);
  };
  auto add_linear_term = [&](int i, double c) {
    add_lin(i, c / 2);
    add_lin(n + i, -c / 2);
  };
  auto add_quad_term = [&](int i, int j, double lam) {
    if (lam == 0) return;
    if (lam < 0) {
      add_quad_sub(i, j, lam / 2);
      add_lin(n + i, -lam / 2);
      add_lin(n + j, -lam / 2);
      add_quad_sub(n + i, n + j, lam / 2);
    } else {
      add_lin(i, lam / 2);
      add_quad_sub(i, n + j, -lam / 2);
      add_lin(j, lam / 2);
      add_quad_sub(n + i, j, -lam / 2);
    }
  };

  // Multilinear coefficients of the minimization objective -E.
  for (int v = 0; v < n; ++v) {
    const auto& u = energy.unary()[static_cast<std::size_t>(v)];
    add_linear_term(v, u[0] - u[1]);
  }
  for (const auto& p : energy.pairs()) {
    const auto& t = p.table;
    add_linear_term(p.a, t[0][0] - t[1][0]);
    add_linear_term(p.b, t[0][0] - t[0][1]);
    add_quad_term(p.a, p.b, t[0][1] + t[1][0] - t[0][0] - t[1][1]);
  }

  flow.solve(source, sink);
  auto reach = flow.source_side();

  Labeling out = Labeling::filled(n, kUnlabeled);
  for (int v = 0; v < n; ++v) {
    const bool plain = reach[static_cast<std::size_t>(v)] == 0;       // 1 on the sink side
    const bool mirror = reach[static_cast<std::size_t>(n + v)] == 0;
    if (plain != mirror) out.values[static_cast<std::size_t>(v)] = plain ? 1 : 0;
  }
  return out;
}

namespace {

// Iterated conditional modes restricted to `movable`, strict improvements
// only, so warm-start labels survive ties.
void icm(const PairwiseEnergy& energy, Labeling& labels, const std::vector<char>& movable) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (int v = 0; v < energy.node_count(); ++v) {
      if (!movable[static_cast<std::size_t>(v)]) continue;
      double score[2] = {energy.unary()[static_cast<std::size_t>(v)][0],
                         energy.unary()[static_cast<std::size_t>(v)][1]};
      for (int pi : energy.incident()[static_cast<std::size_t>(v)]) {
        const auto& p = energy.pairs()[static_cast<std::size_t>(pi)];
        if (p.a == v) {
          auto other = labels.values[static_cast<std::size_t>(p.b)];
          score[0] += p.table[0][other];
          score[1] += p.table[1][other];
        } else {
          auto other = labels.values[static_cast<std::size_t>(p.a)];
          score[0] += p.table[other][0];
          score[1] += p.table[other][1];
        }
      }
      auto& cur = labels.values[static_cast<std::size_t>(v)];
      std::int8_t best = score[1] > score[0] ? 1 : 0;
      if (score[best] > score[1 - best] && best != cur) {
        cur = best;
        changed = true;
      }
    }
  }
}

}  // namespace

Labeling maximize(const PairwiseEnergy& energy, const Labeling& warmStart) {
  if (static_cast<int>(warmStart.values.size()) != energy.node_count())
    throw std::runtime_error("warm start size mismatch");
  if (!warmStart.fully_labeled()) throw std::runtime_error("warm start must be fully labeled");
  check_finite(energy);

  Labeling persistent = solve_persistent(energy);
  Labeling labels = warmStart;
  std::vector<char> movable(static_cast<std::size_t>(energy.node_count()), 0);
  for (int v = 0; v < energy.node_count(); ++v) {
    auto p = persistent.values[static_cast<std::size_t>(v)];
    if (p == kUnlabeled)
      movable[static_cast<std::size_t>(v)] = 1;
    else
      labels.values[static_cast<std::size_t>(v)] = p;
  }
  icm(energy, labels, movable);

  // Autarky of the persistent labels plus strict-improvement ICM already
  // guarantee this; the guard makes it unconditional.
  if (energy_of(energy, labels) < energy_of(energy, warmStart)) return warmStart;
  return labels;
}

Labeling maximize_clamped(const PairwiseEnergy& energy, const Labeling& warmStart,
                          const std::vector<std::int8_t>& clamped) {
  const int n = energy.node_count();
  if (static_cast<int>(clamped.size()) != n) throw std::runtime_error("clamp size mismatch");

  std::vector<int> freeIndex(static_cast<std::size_t>(n), -1);
  std::vector<int> freeNodes;
  for (int v = 0; v < n; ++v)
    if (clamped[static_cast<std::size_t>(v)] == kUnlabeled) {
      freeIndex[static_cast<std::size_t>(v)] = static_cast<int>(freeNodes.size());
      freeNodes.push_back(v);
    }

  Labeling full = warmStart;
  for (int v = 0; v < n; ++v)
    if (clamped[static_cast<std::size_t>(v)] != kUnlabeled)
      full.values[static_cast<std::size_t>(v)] = clamped[static_cast<std::size_t>(v)];
  if (freeNodes.empty()) return full;

  // Condition the energy on the clamped labels.
  PairwiseEnergy reduced(static_cast<int>(freeNodes.size()));
  for (std::size_t i = 0; i < freeNodes.size(); ++i) {
    const auto& u = energy.unary()[static_cast<std::size_t>(freeNodes[i])];
    reduced.add_unary(static_cast<int>(i), u[0], u[1]);
  }
  for (const auto& p : energy.pairs()) {
    const int fa = freeIndex[static_cast<std::size_t>(p.a)];
    const int fb = freeIndex[static_cast<std::size_t>(p.b)];
    if (fa >= 0 && fb >= 0) {
      reduced.add_pairwise(fa, fb, p.table[0][0], p.table[0][1], p.table[1][0], p.table[1][1]);
    } else if (fa >= 0) {
      auto lb = clamped[static_cast<std::size_t>(p.b)];
      reduced.add_unary(fa, p.table[0][lb], p.table[1][lb]);
    } else if (fb >= 0) {
      auto la = clamped[static_cast<std::size_t>(p.a)];
      reduced.add_unary(fb, p.table[la][0], p.table[la][1]);
    }
  }

  Labeling reducedWarm = Labeling::filled(static_cast<int>(freeNodes.size()), 0);
  for (std::size_t i = 0; i < freeNodes.size(); ++i)
    reducedWarm.values[i] = full.values[static_cast<std::size_t>(freeNodes[i])];

  Labeling solved = maximize(reduced, reducedWarm);
  for (std::size_t i = 0; i < freeNodes.size(); ++i)
    full.values[static_cast<std::size_t>(freeNodes[i])] = solved.values[i];
  return full;
}

}  // namespace circles
