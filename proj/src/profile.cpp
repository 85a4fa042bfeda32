#include "circles/profile.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace circles {

std::string FeaturePath::category_key() const {
  std::string key;
  for (std::size_t i = 0; i + 1 < segments.size(); ++i) {
    if (i) key += ';';
    key += segments[i];
  }
  return key;
}

ProfileStore::ProfileStore(std::vector<FeaturePath> featNames, std::vector<std::uint8_t> egoBits)
    : featNames_(std::move(featNames)), egoBits_(std::move(egoBits)) {
  categoryOf_.reserve(featNames_.size());
  std::unordered_map<std::string, int> seen;
  for (const auto& path : featNames_) {
    if (path.segments.size() < 2)
      throw std::runtime_error("feature path needs at least category and value segments");
    std::string key = path.category_key();
    auto [it, fresh] = seen.emplace(key, static_cast<int>(categories_.size()));
    if (fresh) categories_.push_back(key);
    categoryOf_.push_back(it->second);
  }
  if (egoBits_.empty()) egoBits_.assign(featNames_.size(), 0);
  if (egoBits_.size() != featNames_.size())
    throw std::runtime_error("ego feature vector length mismatch");
}

void ProfileStore::add_node(NodeId id, std::vector<std::uint8_t> bits) {
  if (bits.size() != featNames_.size())
    throw std::runtime_error("feature vector length mismatch for node " + std::to_string(id));
  if (!rows_.emplace(id, std::move(bits)).second)
    throw std::runtime_error("duplicate feature row for node " + std::to_string(id));
}

std::span<const std::uint8_t> ProfileStore::bits(NodeId id) const {
  auto it = rows_.find(id);
  if (it == rows_.end())
    throw std::runtime_error("no feature row for node " + std::to_string(id));
  return it->second;
}

std::vector<NodeId> ProfileStore::node_ids() const {
  std::vector<NodeId> ids;
  ids.reserve(rows_.size());
  for (const auto& [id, bits] : rows_) ids.push_back(id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

ProfileStore select_top_features(const ProfileStore& profiles, int n) {
  const int L = profiles.leaf_count();
  n = std::min(n, L);
  std::vector<std::int64_t> counts(static_cast<std::size_t>(L), 0);
  auto ids = profiles.node_ids();
  for (NodeId id : ids) {
    auto bits = profiles.bits(id);
    for (int l = 0; l < L; ++l) counts[static_cast<std::size_t>(l)] += bits[static_cast<std::size_t>(l)];
  }
  std::vector<int> order(static_cast<std::size_t>(L));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return counts[static_cast<std::size_t>(a)] > counts[static_cast<std::size_t>(b)]; });
  order.resize(static_cast<std::size_t>(n));
  std::sort(order.begin(), order.end());  // keep vocabulary order among the kept leaves

  std::vector<FeaturePath> names;
  std::vector<std::uint8_t> ego;
  names.reserve(order.size());
  ego.reserve(order.size());
  auto egoBits = profiles.ego_bits();
  for (int l : order) {
    names.push_back(profiles.feat_names()[static_cast<std::size_t>(l)]);
    ego.push_back(egoBits[static_cast<std::size_t>(l)]);
  }
  ProfileStore out(std::move(names), std::move(ego));
  for (NodeId id : ids) {
    auto bits = profiles.bits(id);
    std::vector<std::uint8_t> row;
    row.reserve(order.size());
    for (int l : order) row.push_back(bits[static_cast<std::size_t>(l)]);
    out.add_node(id, std::move(row));
  }
  return out;
}

}  // namespace circles
