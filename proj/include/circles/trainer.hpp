#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "circles/features.hpp"
#include "circles/model.hpp"
#include "circles/owlqn.hpp"
#include "circles/pbopt.hpp"
#include "circles/types.hpp"

namespace circles {

struct FitConfig {
  int k = 1;
  bool autoK = false;            // BIC sweep over 1..kMax
  double lambda = 1.0;           // usual grid: {0, 1, 10, 100}
  int maxOuterIters = 50;
  std::uint64_t seed = 1;
  int kMax = 10;
  OwlqnOptions inner;            // parameter-step optimizer settings
  int restarts = 2;              // independent seeded runs, best objective wins
  // Box on the alpha trade-offs; the default pins them at the init value 1.
  // Left unbounded, the optimizer rescales (theta, alpha) -> (theta/t, t*alpha),
  // flattening the in-circle signal while gaming the L1 penalty, so widen
  // the box only deliberately.
  double alphaMin = 1.0;
  double alphaMax = 1.0;
  // Keep feature weights nonnegative (the constant stays free): similarity
  // may pull a pair into a circle but dissimilarity never should. Lifting
  // this exposes degenerate optima built on dissimilarity attraction.
  bool nonnegativeWeights = true;
};

struct FitResult {
  ModelParams params;
  CircleAssignment circles;
  double logLikelihood = 0.0;
  double bic = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Called after every accepted update with the running regularized objective.
using FitObserver = std::function<void(int outerIter, const Memberships& circles, double objective)>;

// -2 ll + paramCount log |E|; edgeCount must be positive.
double bic_score(double logLikelihood, int paramCount, std::int64_t edgeCount);

// Energy over membership-to-circle-k indicators whose total equals the graph
// log-likelihood as a function of C_k, all else fixed.
PairwiseEnergy build_circle_energy(int k, const LikelihoodContext& ctx);

// One full quasi-Newton parameter update maximizing ll - lambda*|theta|_1 at
// fixed circles. Never returns parameters scoring below the input. Alphas are
// kept inside [alphaMin, alphaMax].
ModelParams quasi_newton_step(const EgoNetwork& net, const EdgeFeatureCache& features,
                              const ModelParams& start, const Memberships& circles, double lambda,
                              const OwlqnOptions& options = {}, double alphaMin = 1.0,
                              double alphaMax = 1.0, bool nonnegativeWeights = true);

// Coordinate ascent between per-circle membership updates (random order each
// sweep) and parameter steps, stopping when memberships fix-point or the
// iteration cap is hit.
FitResult fit(const EgoNetwork& net, const EdgeFeatureCache& features, const FitConfig& config,
              const FitObserver& observer = {});

// Fits K = 1..kMax and keeps the BIC minimizer (ties toward smaller K).
FitResult select_k(const EgoNetwork& net, const EdgeFeatureCache& features, const FitConfig& config,
                   const FitObserver& observer = {});

// Final-output cleanup: removes empty circles together with their parameters.
FitResult drop_empty_circles(FitResult result);

namespace detail {
// Shared core used by fit and fit_seeded; clamps may be empty.
FitResult fit_with_clamps(const EgoNetwork& net, const EdgeFeatureCache& features,
                          const FitConfig& config,
                          const std::vector<std::vector<std::int8_t>>& clamps,
                          const Memberships* initial, const FitObserver& observer);
}  // namespace detail

}  // namespace circles
