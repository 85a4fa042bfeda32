#include "circles/extensions.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace circles {

ModelParams fit_supervised(const EgoNetwork& net, const EdgeFeatureCache& features,
                           const CircleAssignment& truth, double lambda,
                           const OwlqnOptions& options) {
  truth.validate_against(net);
  const int K = truth.circle_count();
  if (K == 0) return ModelParams::zeros(0, features.dim());
  Memberships memb = Memberships::from_circles(truth, net);
  ModelParams start = ModelParams::zeros(K, features.dim());
  return quasi_newton_step(net, features, start, memb, lambda, options);
}

namespace {

// Pair terms between the incoming node and every existing node, for one
// candidate membership vector. Work per candidate is linear in |V|.
double augmented_terms(const NewNode& node, const EgoNetwork& net, const EdgeFeatureCache& features,
                       const Memberships& memb, const ModelParams& params,
                       const std::vector<std::uint8_t>& candidate,
                       const std::vector<char>& outEdge, const std::vector<char>& inEdge,
                       PredictStats* stats) {
  const int K = params.circle_count();
  const int n = net.node_count();
  std::vector<double> phi(static_cast<std::size_t>(features.dim()));
  double total = 0.0;
  for (int y = 0; y < n; ++y) {
    features.phi_from_bits(node.features, features.profiles().bits(net.node_at(y)), phi);
    double sum = 0.0;
    for (int k = 0; k < K; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      const bool both = candidate[ku] && memb.contains(k, y);
      sum += (both ? 1.0 : -params.alpha[ku]) * dot(phi, params.theta[ku]);
    }
    auto lp = edge_log_probs(sum);
    if (net.directed()) {
      total += (outEdge[static_cast<std::size_t>(y)] ? lp.edge : lp.nonEdge);
      total += (inEdge[static_cast<std::size_t>(y)] ? lp.edge : lp.nonEdge);
      if (stats) stats->pairTermsEvaluated += 2;
    } else {
      total += outEdge[static_cast<std::size_t>(y)] ? lp.edge : lp.nonEdge;
      if (stats) ++stats->pairTermsEvaluated;
    }
  }
  return total;
}

}  // namespace

std::vector<std::uint8_t> predict_memberships(const NewNode& node, const EgoNetwork& net,
                                              const EdgeFeatureCache& features,
                                              const CircleAssignment& circles,
                                              const ModelParams& params, PredictStats* stats) {
  const int K = params.circle_count();
  if (circles.circle_count() != K) throw std::runtime_error("circle/parameter count mismatch");
  if (static_cast<int>(node.features.size()) != features.profiles().leaf_count())
    throw std::runtime_error("new-node feature vector length mismatch");
  if (K == 0) return {};

  Memberships memb = Memberships::from_circles(circles, net);
  const int n = net.node_count();
  std::vector<char> outEdge(static_cast<std::size_t>(n), 0), inEdge(static_cast<std::size_t>(n), 0);
  for (NodeId id : node.outNeighbors) outEdge[static_cast<std::size_t>(net.index_of(id))] = 1;
  for (NodeId id : node.inNeighbors) inEdge[static_cast<std::size_t>(net.index_of(id))] = 1;
  if (!net.directed())
    for (NodeId id : node.inNeighbors) outEdge[static_cast<std::size_t>(net.index_of(id))] = 1;

  auto score = [&](const std::vector<std::uint8_t>& candidate) {
    return augmented_terms(node, net, features, memb, params, candidate, outEdge, inEdge, stats);
  };

  if (K <= 20) {
    // Mask bit order makes ascending mask = lexicographic candidate order, so
    // strict improvement keeps the lexicographically smallest argmax.
    std::vector<std::uint8_t> best, candidate(static_cast<std::size_t>(K));
    double bestScore = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << K); ++mask) {
      for (int k = 0; k < K; ++k)
        candidate[static_cast<std::size_t>(k)] = (mask >> (K - 1 - k)) & 1u;
      double s = score(candidate);
      if (best.empty() || s > bestScore) {
        best = candidate;
        bestScore = s;
      }
    }
    return best;
  }

  // Greedy coordinate ascent for very large K.
  std::vector<std::uint8_t> current(static_cast<std::size_t>(K), 0);
  double cur = score(current);
  bool improved = true;
  while (improved) {
    improved = false;
    for (int k = 0; k < K; ++k) {
      current[static_cast<std::size_t>(k)] ^= 1;
      double s = score(current);
      if (s > cur) {
        cur = s;
        improved = true;
      } else {
        current[static_cast<std::size_t>(k)] ^= 1;
      }
    }
  }
  return current;
}

FitResult fit_seeded(const EgoNetwork& net, const EdgeFeatureCache& features, const SeedSet& seeds,
                     const FitConfig& config, const FitObserver& observer) {
  const int K = seeds.circle_count();
  if (config.k != K) throw std::runtime_error("config.k must match the seed-set circle count");
  if (!seeds.clampOut.empty() && static_cast<int>(seeds.clampOut.size()) != K)
    throw std::runtime_error("clamp-out list count mismatch");

  const int n = net.node_count();
  std::vector<std::vector<std::int8_t>> clamps(
      static_cast<std::size_t>(K), std::vector<std::int8_t>(static_cast<std::size_t>(n), kUnlabeled));
  Memberships initial(K, n);
  for (int k = 0; k < K; ++k) {
    for (NodeId id : seeds.seeds[static_cast<std::size_t>(k)]) {
      int idx = net.index_of(id);  // throws for unknown seed nodes
      clamps[static_cast<std::size_t>(k)][static_cast<std::size_t>(idx)] = 1;
      initial.set(k, idx, true);
    }
    if (!seeds.clampOut.empty())
      for (NodeId id : seeds.clampOut[static_cast<std::size_t>(k)]) {
        int idx = net.index_of(id);
        if (clamps[static_cast<std::size_t>(k)][static_cast<std::size_t>(idx)] == 1)
          throw std::runtime_error("node " + std::to_string(id) + " clamped both in and out");
        clamps[static_cast<std::size_t>(k)][static_cast<std::size_t>(idx)] = 0;
      }
  }
  return detail::fit_with_clamps(net, features, config, clamps, &initial, observer);
}

}  // namespace circles
