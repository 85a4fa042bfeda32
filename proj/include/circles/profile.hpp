#pragma once

#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "circles/types.hpp"

namespace circles {

// One entry of the tree-path vocabulary: category segments ending in a leaf
// value, e.g. ["education", "name", "Cambridge"].
struct FeaturePath {
  std::vector<std::string> segments;

  // All segments but the last, joined with ';'. Leaves sharing a category key
  // are siblings under one parent.
  std::string category_key() const;
  const std::string& leaf() const { return segments.back(); }
};

// Per-ego-network binary leaf features for every alter plus the ego user.
// The vocabulary (featnames) is local to one ego-network.
class ProfileStore {
 public:
  ProfileStore(std::vector<FeaturePath> featNames, std::vector<std::uint8_t> egoBits);

  // Bits must have length leaf_count(); one row per node, inserted once.
  void add_node(NodeId id, std::vector<std::uint8_t> bits);

  int leaf_count() const { return static_cast<int>(featNames_.size()); }
  int category_count() const { return static_cast<int>(categories_.size()); }

  const std::vector<FeaturePath>& feat_names() const { return featNames_; }
  const std::vector<std::string>& categories() const { return categories_; }
  // Category index of leaf l, ordered by first appearance in the vocabulary.
  int category_of(int leaf) const { return categoryOf_[static_cast<std::size_t>(leaf)]; }

  bool has_node(NodeId id) const { return rows_.count(id) != 0; }
  std::span<const std::uint8_t> bits(NodeId id) const;
  std::span<const std::uint8_t> ego_bits() const { return egoBits_; }

  std::vector<NodeId> node_ids() const;

 private:
  std::vector<FeaturePath> featNames_;
  std::vector<std::string> categories_;
  std::vector<int> categoryOf_;
  std::vector<std::uint8_t> egoBits_;
  std::unordered_map<NodeId, std::vector<std::uint8_t>> rows_;
};

// Reduced copy keeping only the n most frequent leaves (by number of alters
// carrying the bit; ties break toward the lower vocabulary index).
ProfileStore select_top_features(const ProfileStore& profiles, int n);

}  // namespace circles
