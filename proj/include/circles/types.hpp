#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace circles {

using NodeId = std::int64_t;

// Deterministic splitmix64-based generator. Used everywhere instead of the
// standard distributions so that seeded runs reproduce bit-for-bit across
// platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

  bool coin() { return (next() & 1u) != 0; }

  bool bernoulli(double p) { return uniform() < p; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // Derive an independent stream, e.g. one per K in a model-selection sweep.
  Rng fork(std::uint64_t salt) {
    Rng r(state_ ^ (0x9e3779b97f4a7c15ULL * (salt + 1)));
    r.next();
    return r;
  }

 private:
  std::uint64_t state_;
};

// Ego-network: the friends-of-one-user graph. The ego itself is not a node.
class EgoNetwork {
 public:
  EgoNetwork(std::vector<NodeId> nodes, const std::vector<std::pair<NodeId, NodeId>>& edges,
             bool directed);

  int node_count() const { return static_cast<int>(nodes_.size()); }
  std::int64_t edge_count() const { return static_cast<std::int64_t>(edges_.size()); }
  bool directed() const { return directed_; }

  const std::vector<NodeId>& nodes() const { return nodes_; }
  NodeId node_at(int index) const { return nodes_[static_cast<std::size_t>(index)]; }
  bool has_node(NodeId id) const { return index_.count(id) != 0; }
  int index_of(NodeId id) const;

  // Edges as index pairs, canonical (min,max) when undirected.
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  bool has_edge_index(int x, int y) const;
  bool has_edge(NodeId x, NodeId y) const { return has_edge_index(index_of(x), index_of(y)); }

  // Out-neighborhood for directed graphs, full neighborhood otherwise.
  const std::vector<int>& neighbors(int index) const { return adjacency_[static_cast<std::size_t>(index)]; }
  // In-neighborhood; equals neighbors() for undirected graphs.
  const std::vector<int>& in_neighbors(int index) const {
    return directed_ ? in_adjacency_[static_cast<std::size_t>(index)] : adjacency_[static_cast<std::size_t>(index)];
  }

  // Number of (x,y) pairs in the likelihood domain: unordered x<y pairs for
  // undirected networks, ordered x!=y pairs for directed ones.
  std::int64_t pair_count() const {
    std::int64_t n = node_count();
    return directed_ ? n * (n - 1) : n * (n - 1) / 2;
  }

 private:
  std::vector<NodeId> nodes_;
  std::unordered_map<NodeId, int> index_;
  std::vector<std::pair<int, int>> edges_;
  std::unordered_set<std::uint64_t> edgeKeys_;
  std::vector<std::vector<int>> adjacency_;
  std::vector<std::vector<int>> in_adjacency_;
  bool directed_ = false;
};

// Applies fn(i, j) to every pair in the likelihood domain, in a fixed order.
template <typename Fn>
void for_each_pair(const EgoNetwork& net, Fn&& fn) {
  const int n = net.node_count();
  if (net.directed()) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) fn(i, j);
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) fn(i, j);
  }
}

// Materialized pair stream over node ids (small networks / tests).
std::vector<std::pair<NodeId, NodeId>> node_pairs(const EgoNetwork& net);

// K circles, each a sorted set of node ids. Circles may overlap, nest, or be
// empty while optimization is in flight.
struct CircleAssignment {
  std::vector<std::vector<NodeId>> circles;

  int circle_count() const { return static_cast<int>(circles.size()); }
  void validate_against(const EgoNetwork& net) const;
  void normalize();  // sort + dedup each circle
};

// Per-circle profile-similarity weights theta_k (index 0 is the constant
// feature) and trade-off scalars alpha_k.
struct ModelParams {
  std::vector<std::vector<double>> theta;
  std::vector<double> alpha;

  int circle_count() const { return static_cast<int>(theta.size()); }
  int dim() const { return theta.empty() ? 0 : static_cast<int>(theta.front().size()); }

  static ModelParams zeros(int k, int dim);
  // theta drawn coordinate-wise uniform from {0,1}, alpha = 1.
  static ModelParams random_init(int k, int dim, Rng& rng);
};

// Dense K x N membership matrix over node indices; the working representation
// used by the optimizers.
class Memberships {
 public:
  Memberships() = default;
  Memberships(int k, int n) : k_(k), n_(n), bits_(static_cast<std::size_t>(k) * n, 0) {}

  static Memberships from_circles(const CircleAssignment& circles, const EgoNetwork& net);
  CircleAssignment to_circles(const EgoNetwork& net) const;

  int circle_count() const { return k_; }
  int node_count() const { return n_; }

  bool contains(int k, int node) const { return bits_[idx(k, node)] != 0; }
  void set(int k, int node, bool member) { bits_[idx(k, node)] = member ? 1 : 0; }

  std::span<const std::uint8_t> row(int k) const {
    return {bits_.data() + idx(k, 0), static_cast<std::size_t>(n_)};
  }
  void assign_row(int k, std::span<const std::uint8_t> values);

  // Membership column for one node, as a K-bit vector.
  std::vector<std::uint8_t> column(int node) const;

  int size_of(int k) const;
  bool operator==(const Memberships& other) const {
    return k_ == other.k_ && n_ == other.n_ && bits_ == other.bits_;
  }

 private:
  std::size_t idx(int k, int node) const {
    return static_cast<std::size_t>(k) * n_ + static_cast<std::size_t>(node);
  }
  int k_ = 0;
  int n_ = 0;
  std::vector<std::uint8_t> bits_;
};

}  // namespace circles
