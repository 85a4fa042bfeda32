#pragma once

#include <cstdint>
#include <vector>

#include "circles/features.hpp"
#include "circles/trainer.hpp"
#include "circles/types.hpp"

namespace circles {

// Weak supervision: per-circle must-include lists; clampOut holds optional
// must-exclude (negative evidence) lists.
struct SeedSet {
  std::vector<std::vector<NodeId>> seeds;
  std::vector<std::vector<NodeId>> clampOut;

  int circle_count() const { return static_cast<int>(seeds.size()); }
};

// Parameters that best explain fully observed circles: a single quasi-Newton
// ascent from theta = 0, alpha = 1, no latent inference.
ModelParams fit_supervised(const EgoNetwork& net, const EdgeFeatureCache& features,
                           const CircleAssignment& truth, double lambda,
                           const OwlqnOptions& options = {});

// A friend about to join the network: leaf bits plus edges into the existing
// node set. inNeighbors is only meaningful for directed networks.
struct NewNode {
  std::vector<std::uint8_t> features;
  std::vector<NodeId> outNeighbors;
  std::vector<NodeId> inNeighbors;
};

struct PredictStats {
  std::int64_t pairTermsEvaluated = 0;
};

// Membership bitvector for the new node maximizing the augmented
// log-likelihood. Exhaustive over 2^K assignments for K <= 20 (ties resolve
// to the lexicographically smallest vector), greedy coordinate ascent above
// that. Only pair terms incident on the new node are ever evaluated.
std::vector<std::uint8_t> predict_memberships(const NewNode& node, const EgoNetwork& net,
                                              const EdgeFeatureCache& features,
                                              const CircleAssignment& circles,
                                              const ModelParams& params,
                                              PredictStats* stats = nullptr);

// Unsupervised fit conditioned on the seeds: circle k's update keeps s_k
// clamped in (and clampOut[k] clamped out), so every intermediate and final
// assignment satisfies the evidence.
FitResult fit_seeded(const EgoNetwork& net, const EdgeFeatureCache& features, const SeedSet& seeds,
                     const FitConfig& config, const FitObserver& observer = {});

}  // namespace circles
