#pragma once

#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "circles/types.hpp"

namespace circles {

// Energy over binary node labels with unary terms and sparse pairwise 2x2
// tables; the solver MAXIMIZES it.
class PairwiseEnergy {
 public:
  struct PairTerm {
    int a, b;                          // canonical a < b
    std::array<std::array<double, 2>, 2> table;
  };

  explicit PairwiseEnergy(int nodes);

  int node_count() const { return static_cast<int>(unary_.size()); }
  void add_unary(int v, double e0, double e1);
  // Accumulates; (b, a) input is transposed into canonical form.
  void add_pairwise(int a, int b, double e00, double e01, double e10, double e11);

  const std::vector<std::array<double, 2>>& unary() const { return unary_; }
  const std::vector<PairTerm>& pairs() const { return pairs_; }
  const std::vector<std::vector<int>>& incident() const { return incident_; }

 private:
  std::vector<std::array<double, 2>> unary_;
  std::vector<PairTerm> pairs_;
  std::vector<std::vector<int>> incident_;           // node -> pair indices
  std::unordered_map<std::uint64_t, int> pairIndex_;
};

constexpr std::int8_t kUnlabeled = -1;

struct Labeling {
  std::vector<std::int8_t> values;  // 0, 1, or kUnlabeled

  static Labeling filled(int n, std::int8_t v) { return {std::vector<std::int8_t>(static_cast<std::size_t>(n), v)}; }
  bool fully_labeled() const {
    for (auto v : values)
      if (v == kUnlabeled) return false;
    return true;
  }
};

// Sum of unary and pairwise table entries; labeling must be complete.
double energy_of(const PairwiseEnergy& energy, const Labeling& labeling);

// Roof-duality (QPBO) persistent labels: every labeled node agrees with some
// globally optimal labeling; the rest come back kUnlabeled.
Labeling solve_persistent(const PairwiseEnergy& energy);

// Full pipeline: persistency, then warm-start fill-in, then ICM on the
// unlabeled nodes. The result never scores below the warm start.
Labeling maximize(const PairwiseEnergy& energy, const Labeling& warmStart);

// Same, with some labels forced (clamped[v] in {0,1}; kUnlabeled = free).
Labeling maximize_clamped(const PairwiseEnergy& energy, const Labeling& warmStart,
                          const std::vector<std::int8_t>& clamped);

}  // namespace circles
