#pragma once

#include <cstdint>
#include <string>

#include "circles/profile.hpp"
#include "circles/types.hpp"

namespace circles {

enum class OverlapStructure { disjoint, overlapping, nested, mixed };

OverlapStructure parse_structure(const std::string& name);
const char* to_string(OverlapStructure structure);

// Planted-model description. Each circle owns a block of leaves: members
// carry the whole block, everyone else draws the block's bits fair-coin, so
// co-members look identical on their block while other pairs look half
// different. separation is the total weight a circle's theta places on its
// block (spread evenly across the block leaves).
struct PlantedSpec {
  int n = 190;
  int k = 4;
  OverlapStructure structure = OverlapStructure::mixed;
  double separation = 4.0;
  int featureDim = 0;  // 0: derived as 4*k (+4 when k = 0)
  std::uint64_t seed = 1;
};

struct PlantedInstance {
  EgoNetwork network;
  ProfileStore profiles;
  CircleAssignment circles;
  ModelParams params;
};

// Samples memberships per the structure, builds profiles and true parameters,
// then draws every pair's edge independently with probability
// logistic(Phi(e)) under the true model.
PlantedInstance generate(const PlantedSpec& spec);

struct StructureStats {
  std::vector<double> maxContainment;  // per circle: max_j |Ci ^ Cj| / |Ci|
  std::vector<int> sizes;
  double densityIn = 0.0;   // edge fraction among pairs sharing a circle
  double densityOut = 0.0;  // edge fraction among the rest
};

StructureStats summarize(const EgoNetwork& net, const CircleAssignment& circles);

}  // namespace circles
