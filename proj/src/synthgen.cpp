#include "circles/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>
#include <stdexcept>

#include "circles/model.hpp"

namespace circles {

OverlapStructure parse_structure(const std::string& name) {
  if (name == "disjoint") return OverlapStructure::disjoint;
  if (name == "overlapping") return OverlapStructure::overlapping;
  if (name == "nested") return OverlapStructure::nested;
  if (name == "mixed") return OverlapStructure::mixed;
  throw std::invalid_argument("unknown overlap structure '" + name + "'");
}

const char* to_string(OverlapStructure structure) {
  switch (structure) {
    case OverlapStructure::disjoint: return "disjoint";
    case OverlapStructure::overlapping: return "overlapping";
    case OverlapStructure::nested: return "nested";
    case OverlapStructure::mixed: return "mixed";
  }
  return "?";
}

namespace {

// Membership matrix sampling. Nodes are pre-shuffled, so contiguous windows
// act like random subsets.
std::vector<std::vector<int>> sample_members(const PlantedSpec& spec, Rng& rng) {
  const int n = spec.n;
  const int K = spec.k;
  std::vector<int> ring(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) ring[static_cast<std::size_t>(i)] = i;
  rng.shuffle(ring);

  auto window = [&](int start, int len) {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(len));
    for (int i = 0; i < len; ++i) out.push_back(ring[static_cast<std::size_t>((start + i) % n)]);
    return out;
  };

  std::vector<std::vector<int>> circles;
  if (K == 0) return circles;
  const int base = std::max(3, n / K);

  switch (spec.structure) {
    case OverlapStructure::disjoint: {
      int start = 0;
      for (int k = 0; k < K; ++k) {
        int len = k + 1 == K ? n - start : n / K;
        circles.push_back(window(start, len));
        start += len;
      }
      break;
    }
    case OverlapStructure::overlapping: {
      const int len = std::min(n, std::max(3, (n * 7) / (K * 5)));  // ~40% beyond the stride
      for (int k = 0; k < K; ++k) circles.push_back(window(k * (n / K), len));
      break;
    }
    case OverlapStructure::nested: {
      for (int k = 0; k < K; ++k) {
        int len = std::max(3, (n * (K - k)) / (K + 1));
        circles.push_back(window(0, len));
      }
      break;
    }
    case OverlapStructure::mixed: {
      // Roughly a quarter nested, half overlapping, quarter disjoint, as in
      // the ground-truth circle statistics. Each parent hosts at most one
      // nested sub-circle, and every circle keeps a large exclusive part, so
      // circles remain mutually distinguishable.
      // Bigger-than-even circles keep sub-structures information-rich enough
      // to survive model selection.
      const int mixedBase = std::max(3, (2 * n) / (K + 1));
      circles.push_back(window(0, mixedBase));
      std::set<int> covered(circles[0].begin(), circles[0].end());
      std::set<int> nestedParents;
      for (int k = 1; k < K; ++k) {
        double roll = rng.uniform();
        std::vector<int> members;
        std::vector<int> bigParents;
        for (std::size_t p = 0; p < circles.size(); ++p)
          if (static_cast<int>(circles[p].size()) >= std::max(10, mixedBase / 2) &&
              !nestedParents.count(static_cast<int>(p)))
            bigParents.push_back(static_cast<int>(p));
        auto add_fresh = [&](int target, const std::vector<int>& avoid) {
          for (int i = 0; i < n && static_cast<int>(members.size()) < target; ++i) {
            int cand = ring[static_cast<std::size_t>(i)];
            if (std::find(members.begin(), members.end(), cand) == members.end() &&
                std::find(avoid.begin(), avoid.end(), cand) == avoid.end())
              members.push_back(cand);
          }
        };
        if (roll < 0.25 && !bigParents.empty()) {
          // nested: two thirds of one earlier circle, one sub per parent
          int pIdx = bigParents[static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(bigParents.size())))];
          const auto& parent = circles[static_cast<std::size_t>(pIdx)];
          int len = std::max(3, static_cast<int>(parent.size() * 2) / 3);
          int off = static_cast<int>(rng.below(static_cast<std::uint64_t>(parent.size() - len + 1)));
          members.assign(parent.begin() + off, parent.begin() + off + len);
          nestedParents.insert(pIdx);
          nestedParents.insert(k);  // no depth-2 chains; they blur into the grandparent
        } else if (roll < 0.75 && !bigParents.empty()) {
          // overlapping: ~40% of the parent plus fresh nodes up to base size
          int pIdx = bigParents[static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(bigParents.size())))];
          const auto& parent = circles[static_cast<std::size_t>(pIdx)];
          int take = std::max(2, static_cast<int>(parent.size() * 2) / 5);
          int off = static_cast<int>(rng.below(static_cast<std::uint64_t>(parent.size() - take + 1)));
          members.assign(parent.begin() + off, parent.begin() + off + take);
          add_fresh(std::max(mixedBase, take + 3), parent);
        } else {
          // disjoint: prefer so-far-uncovered nodes
          for (int i = 0; i < n && static_cast<int>(members.size()) < mixedBase; ++i) {
            int cand = ring[static_cast<std::size_t>(n - 1 - i)];
            if (!covered.count(cand)) members.push_back(cand);
          }
          add_fresh(std::max(3, mixedBase / 2), {});
        }
        covered.insert(members.begin(), members.end());
        circles.push_back(std::move(members));
      }
      break;
    }
  }
  return circles;
}

}  // namespace

PlantedInstance generate(const PlantedSpec& spec) {
  if (spec.n < 2) throw std::runtime_error("planted instance needs at least two nodes");
  if (spec.k < 0 || spec.separation < 0) throw std::runtime_error("invalid planted spec");
  const int K = spec.k;
  const int L = spec.featureDim > 0 ? spec.featureDim : (K > 0 ? 8 * K : 4);
  const int blockLen = K > 0 ? std::max(1, L / (K + 1)) : 0;
  if (K > 0 && blockLen * K > L) throw std::runtime_error("featureDim too small for k blocks");

  Rng rng(spec.seed);
  auto members = sample_members(spec, rng);

  std::vector<std::vector<std::uint8_t>> isMember(static_cast<std::size_t>(K),
                                                  std::vector<std::uint8_t>(static_cast<std::size_t>(spec.n), 0));
  for (int k = 0; k < K; ++k)
    for (int i : members[static_cast<std::size_t>(k)]) isMember[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] = 1;

  // Leaf bits: members carry their circle's whole block; everyone else flips
  // a fair coin per block leaf, so co-members look identical on their block
  // while any other pair looks about half different on it. Leftover leaves
  // are sparse noise the fitter has to zero out.
  std::vector<std::vector<std::uint8_t>> rows(static_cast<std::size_t>(spec.n),
                                              std::vector<std::uint8_t>(static_cast<std::size_t>(L), 0));
  for (int i = 0; i < spec.n; ++i) {
    for (int k = 0; k < K; ++k) {
      const bool in = isMember[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] != 0;
      for (int b = 0; b < blockLen; ++b)
        rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(k * blockLen + b)] =
            in ? 1 : (rng.coin() ? 1 : 0);
    }
    for (int l = K * blockLen; l < L; ++l)
      rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)] = rng.bernoulli(0.1) ? 1 : 0;
  }

  // True parameters: per-leaf block weight separation/blockLen, constant
  // weight sized so same-circle pairs sit above coin-flip density and
  // unrelated pairs well below it.
  const double w = K > 0 ? spec.separation / blockLen : 0.0;
  const double c = K > 0 ? spec.separation * 0.75 : 0.0;
  ModelParams params = ModelParams::zeros(K, L + 1);
  for (int k = 0; k < K; ++k) {
    params.theta[static_cast<std::size_t>(k)][0] = c;
    for (int b = 0; b < blockLen; ++b)
      params.theta[static_cast<std::size_t>(k)][static_cast<std::size_t>(1 + k * blockLen + b)] = w;
  }

  // Edge sampling straight from the model.
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (int i = 0; i < spec.n; ++i) {
    for (int j = i + 1; j < spec.n; ++j) {
      double phi = 0.0;
      for (int k = 0; k < K; ++k) {
        double dotK = c;
        for (int b = 0; b < blockLen; ++b) {
          int l = k * blockLen + b;
          dotK -= w * double(rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)] ^
                             rows[static_cast<std::size_t>(j)][static_cast<std::size_t>(l)]);
        }
        const bool both = isMember[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] &&
                          isMember[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
        phi += (both ? 1.0 : -1.0) * dotK;  // alpha = 1
      }
      if (rng.uniform() < logistic(phi)) edges.emplace_back(i, j);
    }
  }

  std::vector<NodeId> nodes(static_cast<std::size_t>(spec.n));
  for (int i = 0; i < spec.n; ++i) nodes[static_cast<std::size_t>(i)] = i;
  EgoNetwork network(nodes, edges, false);

  std::vector<FeaturePath> names;
  names.reserve(static_cast<std::size_t>(L));
  for (int k = 0; k < K; ++k)
    for (int b = 0; b < blockLen; ++b)
      names.push_back(FeaturePath{{"block" + std::to_string(k), "value" + std::to_string(b)}});
  for (int l = K * blockLen; l < L; ++l)
    names.push_back(FeaturePath{{"noise", "n" + std::to_string(l)}});
  ProfileStore profiles(std::move(names), std::vector<std::uint8_t>(static_cast<std::size_t>(L), 0));
  for (int i = 0; i < spec.n; ++i) profiles.add_node(i, rows[static_cast<std::size_t>(i)]);

  CircleAssignment assignment;
  assignment.circles.resize(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    for (int i : members[static_cast<std::size_t>(k)])
      assignment.circles[static_cast<std::size_t>(k)].push_back(i);
    std::sort(assignment.circles[static_cast<std::size_t>(k)].begin(),
              assignment.circles[static_cast<std::size_t>(k)].end());
  }

  return PlantedInstance{std::move(network), std::move(profiles), std::move(assignment),
                         std::move(params)};
}

StructureStats summarize(const EgoNetwork& net, const CircleAssignment& circles) {
  StructureStats stats;
  const int K = circles.circle_count();
  for (int i = 0; i < K; ++i) {
    const auto& ci = circles.circles[static_cast<std::size_t>(i)];
    stats.sizes.push_back(static_cast<int>(ci.size()));
    double best = 0.0;
    std::set<NodeId> si(ci.begin(), ci.end());
    for (int j = 0; j < K; ++j) {
      if (i == j || ci.empty()) continue;
      const auto& cj = circles.circles[static_cast<std::size_t>(j)];
      std::size_t common = 0;
      for (NodeId id : cj)
        if (si.count(id)) ++common;
      best = std::max(best, double(common) / double(ci.size()));
    }
    stats.maxContainment.push_back(best);
  }

  Memberships memb = Memberships::from_circles(circles, net);
  std::int64_t inPairs = 0, outPairs = 0, inEdges = 0, outEdges = 0;
  for_each_pair(net, [&](int i, int j) {
    bool shared = false;
    for (int k = 0; k < K && !shared; ++k) shared = memb.contains(k, i) && memb.contains(k, j);
    const bool edge = net.has_edge_index(i, j);
    if (shared) {
      ++inPairs;
      inEdges += edge;
    } else {
      ++outPairs;
      outEdges += edge;
    }
  });
  stats.densityIn = inPairs ? double(inEdges) / double(inPairs) : 0.0;
  stats.densityOut = outPairs ? double(outEdges) / double(outPairs) : 0.0;
  return stats;
}

}  // namespace circles
