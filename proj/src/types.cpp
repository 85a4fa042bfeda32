#include "circles/types.hpp"

#include <algorithm>

namespace circles {

namespace {

std::uint64_t edge_key(int x, int y) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(x)) << 32) |
         static_cast<std::uint32_t>(y);
}

}  // namespace

EgoNetwork::EgoNetwork(std::vector<NodeId> nodes,
                       const std::vector<std::pair<NodeId, NodeId>>& edges, bool directed)
    : nodes_(std::move(nodes)), directed_(directed) {
  index_.reserve(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    auto [it, fresh] = index_.emplace(nodes_[i], static_cast<int>(i));
    if (!fresh) throw std::runtime_error("duplicate node id " + std::to_string(nodes_[i]));
  }
  adjacency_.resize(nodes_.size());
  if (directed_) in_adjacency_.resize(nodes_.size());
  edges_.reserve(edges.size());
  for (const auto& [a, b] : edges) {
    if (a == b) throw std::runtime_error("self-loop on node " + std::to_string(a));
    auto ia = index_.find(a);
    auto ib = index_.find(b);
    if (ia == index_.end() || ib == index_.end())
      throw std::runtime_error("edge endpoint not in node set: " + std::to_string(a) + " " +
                               std::to_string(b));
    int x = ia->second;
    int y = ib->second;
    if (!directed_ && x > y) std::swap(x, y);
    if (!edgeKeys_.insert(edge_key(x, y)).second) continue;  // ignore duplicates
    edges_.emplace_back(x, y);
    adjacency_[static_cast<std::size_t>(x)].push_back(y);
    if (directed_)
      in_adjacency_[static_cast<std::size_t>(y)].push_back(x);
    else
      adjacency_[static_cast<std::size_t>(y)].push_back(x);
  }
  for (auto& a : adjacency_) std::sort(a.begin(), a.end());
  for (auto& a : in_adjacency_) std::sort(a.begin(), a.end());
}

int EgoNetwork::index_of(NodeId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw std::runtime_error("unknown node id " + std::to_string(id));
  return it->second;
}

bool EgoNetwork::has_edge_index(int x, int y) const {
  if (!directed_ && x > y) std::swap(x, y);
  return edgeKeys_.count(edge_key(x, y)) != 0;
}

std::vector<std::pair<NodeId, NodeId>> node_pairs(const EgoNetwork& net) {
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(static_cast<std::size_t>(net.pair_count()));
  for_each_pair(net, [&](int i, int j) { out.emplace_back(net.node_at(i), net.node_at(j)); });
  return out;
}

void CircleAssignment::validate_against(const EgoNetwork& net) const {
  for (const auto& circle : circles)
    for (NodeId id : circle)
      if (!net.has_node(id))
        throw std::runtime_error("circle member " + std::to_string(id) + " not in network");
}

void CircleAssignment::normalize() {
  for (auto& circle : circles) {
    std::sort(circle.begin(), circle.end());
    circle.erase(std::unique(circle.begin(), circle.end()), circle.end());
  }
}

ModelParams ModelParams::zeros(int k, int dim) {
  ModelParams p;
  p.theta.assign(static_cast<std::size_t>(k), std::vector<double>(static_cast<std::size_t>(dim), 0.0));
  p.alpha.assign(static_cast<std::size_t>(k), 1.0);
  return p;
}

ModelParams ModelParams::random_init(int k, int dim, Rng& rng) {
  ModelParams p = zeros(k, dim);
  for (auto& t : p.theta)
    for (auto& w : t) w = rng.coin() ? 1.0 : 0.0;
  return p;
}

Memberships Memberships::from_circles(const CircleAssignment& circles, const EgoNetwork& net) {
  Memberships m(circles.circle_count(), net.node_count());
  for (int k = 0; k < circles.circle_count(); ++k)
    for (NodeId id : circles.circles[static_cast<std::size_t>(k)]) m.set(k, net.index_of(id), true);
  return m;
}

CircleAssignment Memberships::to_circles(const EgoNetwork& net) const {
  CircleAssignment out;
  out.circles.resize(static_cast<std::size_t>(k_));
  for (int k = 0; k < k_; ++k)
    for (int i = 0; i < n_; ++i)
      if (contains(k, i)) out.circles[static_cast<std::size_t>(k)].push_back(net.node_at(i));
  return out;
}

void Memberships::assign_row(int k, std::span<const std::uint8_t> values) {
  if (static_cast<int>(values.size()) != n_) throw std::runtime_error("membership row size mismatch");
  std::copy(values.begin(), values.end(), bits_.begin() + static_cast<std::ptrdiff_t>(idx(k, 0)));
}

std::vector<std::uint8_t> Memberships::column(int node) const {
  std::vector<std::uint8_t> col(static_cast<std::size_t>(k_));
  for (int k = 0; k < k_; ++k) col[static_cast<std::size_t>(k)] = contains(k, node) ? 1 : 0;
  return col;
}

int Memberships::size_of(int k) const {
  int c = 0;
  for (int i = 0; i < n_; ++i) c += contains(k, i) ? 1 : 0;
  return c;
}

}  // namespace circles
