#pragma once

#include <span>
#include <string>
#include <vector>

#include "circles/profile.hpp"
#include "circles/types.hpp"

namespace circles {

// The four edge-feature constructions. phi schemes work on leaves, psi
// schemes on leaf categories; *1 compares the two alters directly, *2
// compares each alter against the ego.
enum class FeatureScheme { phi1, phi2, psi1, psi2 };

FeatureScheme parse_feature_scheme(const std::string& name);
const char* to_string(FeatureScheme scheme);

// F+1 including the constant component.
int feature_dimension(FeatureScheme scheme, const ProfileStore& profiles);

// sigma_{x,y}: 1 where exactly one of the two profiles carries the leaf.
std::vector<std::uint8_t> diff_vector(const ProfileStore& profiles, NodeId x, NodeId y);

// sigma'_{x,y}: per-category counts of differing leaves.
std::vector<int> compressed_diff(const ProfileStore& profiles, NodeId x, NodeId y);

// phi(x,y) under the chosen scheme; component 0 is the constant 1.
std::vector<double> pair_features(FeatureScheme scheme, const ProfileStore& profiles, NodeId x,
                                  NodeId y);

enum class CacheMode { automatic, dense, lazy };

// Pair-feature provider bound to one network and scheme. Either materializes
// the full |V|^2/2 table (dense) or recomputes on demand (lazy); both routes
// produce identical vectors. Construction completes before any sharing, and
// reads are const, so one cache may serve concurrent readers.
class EdgeFeatureCache {
 public:
  EdgeFeatureCache(const EgoNetwork& net, const ProfileStore& profiles, FeatureScheme scheme,
                   CacheMode mode = CacheMode::automatic);

  FeatureScheme scheme() const { return scheme_; }
  int dim() const { return dim_; }
  bool dense() const { return dense_; }
  const EgoNetwork& network() const { return net_; }
  const ProfileStore& profiles() const { return profiles_; }

  // Feature vector for the node-index pair (i, j). Returns a view into the
  // dense table when materialized, otherwise fills `scratch`.
  std::span<const double> phi(int i, int j, std::vector<double>& scratch) const;

  // Same construction applied to raw leaf-bit rows; used for nodes that are
  // not part of the network (type representatives, incoming nodes).
  void phi_from_bits(std::span<const std::uint8_t> bitsX, std::span<const std::uint8_t> bitsY,
                     std::span<double> out) const;

 private:
  std::size_t pair_slot(int i, int j) const;

  const EgoNetwork& net_;
  const ProfileStore& profiles_;
  FeatureScheme scheme_;
  int dim_;
  bool dense_;
  std::vector<std::vector<std::uint8_t>> rows_;     // leaf bits by node index
  std::vector<std::uint8_t> egoBits_;
  std::vector<double> table_;                       // dense pair-major storage
};

}  // namespace circles
