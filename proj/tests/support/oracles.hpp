#pragma once

// Independent reference computations for the test suite. Everything here
// recomputes from first principles (sets, per-pair loops, exhaustive
// enumeration) rather than reusing the library's optimized paths.

#include <cmath>
#include <set>
#include <vector>

#include "circles/features.hpp"
#include "circles/model.hpp"
#include "circles/pbopt.hpp"
#include "circles/types.hpp"

namespace circles::oracle {

// Naive per-pair log-likelihood: memberships via std::set, features recomputed
// from the profile store, long-double accumulation.
inline double naive_log_likelihood(const EgoNetwork& net, const ProfileStore& profiles,
                                   FeatureScheme scheme, const ModelParams& params,
                                   const CircleAssignment& circles) {
  std::vector<std::set<NodeId>> sets;
  for (const auto& c : circles.circles) sets.emplace_back(c.begin(), c.end());
  long double ll = 0.0L;
  for (auto [x, y] : node_pairs(net)) {
    auto phi = pair_features(scheme, profiles, x, y);
    long double sum = 0.0L;
    for (int k = 0; k < params.circle_count(); ++k) {
      const bool both = sets[static_cast<std::size_t>(k)].count(x) && sets[static_cast<std::size_t>(k)].count(y);
      long double dotK = 0.0L;
      for (std::size_t f = 0; f < phi.size(); ++f)
        dotK += static_cast<long double>(phi[f]) * params.theta[static_cast<std::size_t>(k)][f];
      sum += (both ? 1.0L : -static_cast<long double>(params.alpha[static_cast<std::size_t>(k)])) * dotK;
    }
    if (net.has_edge(x, y)) ll += sum;
    ll -= std::log(1.0L + std::exp(sum));
  }
  return static_cast<double>(ll);
}

// Central finite differences of the unregularized log-likelihood over every
// theta and alpha coordinate.
inline Gradients finite_difference_gradients(const EgoNetwork& net, const EdgeFeatureCache& cache,
                                             const ModelParams& params, const Memberships& memb,
                                             double h = 1e-5) {
  Gradients g;
  const int K = params.circle_count();
  const int F1 = params.dim();
  g.theta.assign(static_cast<std::size_t>(K), std::vector<double>(static_cast<std::size_t>(F1), 0.0));
  g.alpha.assign(static_cast<std::size_t>(K), 0.0);
  auto ll_at = [&](const ModelParams& p) {
    LikelihoodContext ctx{net, cache, p, memb, 0.0};
    return log_likelihood(ctx);
  };
  for (int k = 0; k < K; ++k) {
    for (int f = 0; f < F1; ++f) {
      ModelParams plus = params, minus = params;
      plus.theta[static_cast<std::size_t>(k)][static_cast<std::size_t>(f)] += h;
      minus.theta[static_cast<std::size_t>(k)][static_cast<std::size_t>(f)] -= h;
      g.theta[static_cast<std::size_t>(k)][static_cast<std::size_t>(f)] = (ll_at(plus) - ll_at(minus)) / (2 * h);
    }
    ModelParams plus = params, minus = params;
    plus.alpha[static_cast<std::size_t>(k)] += h;
    minus.alpha[static_cast<std::size_t>(k)] -= h;
    g.alpha[static_cast<std::size_t>(k)] = (ll_at(plus) - ll_at(minus)) / (2 * h);
  }
  return g;
}

// Straight table-lookup evaluation of a labeling.
inline double naive_energy(const PairwiseEnergy& energy, const std::vector<int>& labels) {
  double sum = 0.0;
  for (int v = 0; v < energy.node_count(); ++v)
    sum += energy.unary()[static_cast<std::size_t>(v)][labels[static_cast<std::size_t>(v)]];
  for (const auto& p : energy.pairs())
    sum += p.table[labels[static_cast<std::size_t>(p.a)]][labels[static_cast<std::size_t>(p.b)]];
  return sum;
}

struct BruteForce {
  double best;
  std::vector<std::vector<int>> optima;  // every labeling within tol of best
};

inline BruteForce enumerate_optima(const PairwiseEnergy& energy, double tol = 1e-9) {
  const int n = energy.node_count();
  BruteForce result{-std::numeric_limits<double>::infinity(), {}};
  std::vector<int> labels(static_cast<std::size_t>(n), 0);
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    for (int v = 0; v < n; ++v) labels[static_cast<std::size_t>(v)] = (mask >> v) & 1u;
    double e = naive_energy(energy, labels);
    if (e > result.best + tol) {
      result.best = e;
      result.optima.clear();
    }
    if (e >= result.best - tol) result.optima.push_back(labels);
  }
  // One more pass so "within tol of best" is measured against the final best.
  std::vector<std::vector<int>> kept;
  for (auto& l : result.optima)
    if (naive_energy(energy, l) >= result.best - tol) kept.push_back(std::move(l));
  result.optima = std::move(kept);
  return result;
}

// Random modelling instance shared by the model/mcmc/extension tests.
struct Instance {
  EgoNetwork network;
  ProfileStore profiles;
  ModelParams params;
  CircleAssignment circles;
};

inline Instance random_instance(int n, int k, int leaves, Rng& rng, double edgeProb = 0.3,
                                double memberProb = 0.4, bool directed = false) {
  std::vector<NodeId> nodes;
  for (int i = 0; i < n; ++i) nodes.push_back(i);
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = directed ? 0 : i + 1; j < n; ++j)
      if (i != j && rng.bernoulli(edgeProb)) edges.emplace_back(i, j);
  EgoNetwork net(nodes, edges, directed);

  std::vector<FeaturePath> names;
  for (int l = 0; l < leaves; ++l)
    names.push_back(FeaturePath{{"cat" + std::to_string(l % 3), "leaf" + std::to_string(l)}});
  std::vector<std::uint8_t> ego;
  for (int l = 0; l < leaves; ++l) ego.push_back(rng.coin());
  ProfileStore profiles(std::move(names), std::move(ego));
  for (int i = 0; i < n; ++i) {
    std::vector<std::uint8_t> bits;
    for (int l = 0; l < leaves; ++l) bits.push_back(rng.coin());
    profiles.add_node(i, std::move(bits));
  }

  ModelParams params = ModelParams::zeros(k, leaves + 1);
  for (auto& t : params.theta)
    for (auto& w : t) w = rng.uniform(-1.0, 1.0);
  for (auto& a : params.alpha) a = rng.uniform(0.5, 1.5);

  CircleAssignment circles;
  circles.circles.resize(static_cast<std::size_t>(k));
  for (int kk = 0; kk < k; ++kk)
    for (int i = 0; i < n; ++i)
      if (rng.bernoulli(memberProb)) circles.circles[static_cast<std::size_t>(kk)].push_back(i);

  return Instance{std::move(net), std::move(profiles), std::move(params), std::move(circles)};
}

// Naive membership marginals: full per-pair loop over every other node.
inline std::pair<double, double> naive_marginals(const EgoNetwork& net,
                                                 const ProfileStore& profiles, FeatureScheme scheme,
                                                 const ModelParams& params, const Memberships& memb,
                                                 int node, int k) {
  const int n = net.node_count();
  const int K = params.circle_count();
  double l0 = 0.0, l1 = 0.0;
  for (int y = 0; y < n; ++y) {
    if (y == node) continue;
    auto phi = pair_features(scheme, profiles, net.node_at(node), net.node_at(y));
    for (int b = 0; b < 2; ++b) {
      double sum = 0.0;
      for (int j = 0; j < K; ++j) {
        const bool mine = j == k ? b == 1 : memb.contains(j, node);
        const bool both = mine && memb.contains(j, y);
        sum += (both ? 1.0 : -params.alpha[static_cast<std::size_t>(j)]) *
               dot(phi, params.theta[static_cast<std::size_t>(j)]);
      }
      auto lp = edge_log_probs(sum);
      double term;
      if (net.directed())
        term = (net.has_edge_index(node, y) ? lp.edge : lp.nonEdge) +
               (net.has_edge_index(y, node) ? lp.edge : lp.nonEdge);
      else
        term = net.has_edge_index(node, y) ? lp.edge : lp.nonEdge;
      (b == 0 ? l0 : l1) += term;
    }
  }
  return {l0, l1};
}

}  // namespace circles::oracle
