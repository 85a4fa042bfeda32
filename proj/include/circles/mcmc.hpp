#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "circles/features.hpp"
#include "circles/model.hpp"
#include "circles/trainer.hpp"
#include "circles/types.hpp"

namespace circles {

struct AnnealSchedule {
  double t0 = 1.0;
  double decay = 0.95;  // multiplicative, in (0,1)
  int sweeps = 100;
};

// Counts nodes per (membership string, feature string). Nodes of one type are
// interchangeable in every pair probability, which is what the collapsed
// updates exploit.
class TypeTable {
 public:
  struct Entry {
    std::vector<std::uint8_t> memberships;
    std::vector<std::uint8_t> features;
    int count = 0;
  };

  void increment(const std::vector<std::uint8_t>& memberships,
                 const std::vector<std::uint8_t>& features);
  void decrement(const std::vector<std::uint8_t>& memberships,
                 const std::vector<std::uint8_t>& features);

  int total() const { return total_; }
  int distinct_types() const { return static_cast<int>(entries_.size()); }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (const auto& [key, entry] : entries_) fn(entry);
  }

  // Deterministic snapshot, sorted by type key.
  std::vector<Entry> sorted_entries() const;

  bool operator==(const TypeTable& other) const;

  static std::string key_of(const std::vector<std::uint8_t>& memberships,
                            const std::vector<std::uint8_t>& features);

 private:
  std::unordered_map<std::string, Entry> entries_;
  int total_ = 0;
};

// Groups nodes by (membership column, feature row). Feature rows must be
// binary; anything else cannot be collapsed into discrete types.
TypeTable build_type_table(const Memberships& memberships,
                           const std::vector<std::vector<std::uint8_t>>& featureRows);

// Mutable sampler state for one ego-network.
class McmcState {
 public:
  McmcState(const EgoNetwork& net, const EdgeFeatureCache& features, const ModelParams& params,
            const Memberships& memberships);

  const Memberships& memberships() const { return memb_; }
  const ModelParams& params() const { return params_; }
  void set_params(ModelParams params) { params_ = std::move(params); }
  const TypeTable& types() const { return types_; }

  // (l0, l1): log-likelihood of all pair terms incident on `node` with its
  // membership bit for circle k forced to 0 / 1. Collapsed over node types,
  // then corrected along incident edges.
  std::pair<double, double> membership_marginals(int node, int k) const;

  // One annealed pass over every (node, circle) in seeded random order;
  // returns the number of membership flips. The type table is maintained
  // differentially.
  int sweep(double temperature, Rng& rng);

  // Collapsed equivalents of the dense model computations.
  double collapsed_log_likelihood() const;
  double collapsed_ll_and_gradients(Gradients& out) const;

 private:
  void set_membership(int node, int k, bool member);

  const EgoNetwork& net_;
  const EdgeFeatureCache& features_;
  ModelParams params_;
  Memberships memb_;
  std::vector<std::vector<std::uint8_t>> rows_;  // binary feature rows by node index
  TypeTable types_;
};

// Annealed MCMC fit at fixed K: membership sweeps with a parameter step every
// `paramInterval` sweeps, returning the best state visited under the
// regularized objective.
FitResult fit_mcmc(const EgoNetwork& net, const EdgeFeatureCache& features, const FitConfig& config,
                   const AnnealSchedule& schedule = {}, int paramInterval = 10);

}  // namespace circles
