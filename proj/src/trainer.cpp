#include "circles/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace circles {

double bic_score(double logLikelihood, int paramCount, std::int64_t edgeCount) {
  if (edgeCount < 1) throw std::runtime_error("BIC needs at least one edge");
  return -2.0 * logLikelihood + paramCount * std::log(static_cast<double>(edgeCount));
}

PairwiseEnergy build_circle_energy(int k, const LikelihoodContext& ctx) {
  const auto& net = ctx.network;
  const int K = ctx.params.circle_count();
  const double alphaK = ctx.params.alpha[static_cast<std::size_t>(k)];
  const auto& thetaK = ctx.params.theta[static_cast<std::size_t>(k)];

  PairwiseEnergy energy(net.node_count());
  std::vector<double> scratch;
  for_each_pair(net, [&](int i, int j) {
    auto phi = ctx.features.phi(i, j, scratch);
    double ok = 0.0;
    for (int j2 = 0; j2 < K; ++j2) {
      if (j2 == k) continue;
      ok += d_coeff(ctx, j2, i, j) * dot(phi, ctx.params.theta[static_cast<std::size_t>(j2)]);
    }
    const double dotK = dot(phi, thetaK);
    const double in = ok + dotK;           // both endpoints take label 1
    const double out = ok - alphaK * dotK; // any other labeling
    const bool isEdge = net.has_edge_index(i, j);
    const double eIn = (isEdge ? in : 0.0) - softplus(in);
    const double eOut = (isEdge ? out : 0.0) - softplus(out);
    energy.add_pairwise(i, j, eOut, eOut, eOut, eIn);
  });
  return energy;
}

ModelParams quasi_newton_step(const EgoNetwork& net, const EdgeFeatureCache& features,
                              const ModelParams& start, const Memberships& circles, double lambda,
                              const OwlqnOptions& options, double alphaMin, double alphaMax,
                              bool nonnegativeWeights) {
  const int K = start.circle_count();
  const int F1 = start.dim();
  if (K == 0) return start;
  const std::size_t dim = static_cast<std::size_t>(K) * (F1 + 1);

  // Layout: all thetas, then all alphas. L1 applies to thetas only; alphas
  // live in their box.
  std::vector<double> x(dim);
  std::vector<double> l1(dim, 0.0);
  OwlqnOptions opts = options;
  opts.lower.assign(dim, -std::numeric_limits<double>::infinity());
  opts.upper.assign(dim, std::numeric_limits<double>::infinity());
  for (int k = 0; k < K; ++k) {
    for (int f = 0; f < F1; ++f) {
      x[static_cast<std::size_t>(k * F1 + f)] = start.theta[static_cast<std::size_t>(k)][static_cast<std::size_t>(f)];
      l1[static_cast<std::size_t>(k * F1 + f)] = lambda;
      if (nonnegativeWeights && f > 0) opts.lower[static_cast<std::size_t>(k * F1 + f)] = 0.0;
    }
    x[static_cast<std::size_t>(K) * F1 + static_cast<std::size_t>(k)] = start.alpha[static_cast<std::size_t>(k)];
    opts.lower[static_cast<std::size_t>(K) * F1 + static_cast<std::size_t>(k)] = alphaMin;
    opts.upper[static_cast<std::size_t>(K) * F1 + static_cast<std::size_t>(k)] = alphaMax;
  }

  auto unpack = [K, F1](std::span<const double> v) {
    ModelParams p = ModelParams::zeros(K, F1);
    for (int k = 0; k < K; ++k) {
      for (int f = 0; f < F1; ++f)
        p.theta[static_cast<std::size_t>(k)][static_cast<std::size_t>(f)] = v[static_cast<std::size_t>(k * F1 + f)];
      p.alpha[static_cast<std::size_t>(k)] = v[static_cast<std::size_t>(K) * F1 + static_cast<std::size_t>(k)];
    }
    return p;
  };

  Gradients g;
  auto eval = [&](std::span<const double> v, std::span<double> grad) {
    ModelParams p = unpack(v);
    LikelihoodContext ctx{net, features, p, circles, lambda};
    double ll = log_likelihood_and_gradients(ctx, g);
    if (!std::isfinite(ll)) throw std::runtime_error("non-finite log-likelihood");
    for (int k = 0; k < K; ++k) {
      for (int f = 0; f < F1; ++f)
        grad[static_cast<std::size_t>(k * F1 + f)] = -g.theta[static_cast<std::size_t>(k)][static_cast<std::size_t>(f)];
      grad[static_cast<std::size_t>(K) * F1 + static_cast<std::size_t>(k)] = -g.alpha[static_cast<std::size_t>(k)];
    }
    return -ll;
  };

  OwlqnResult result = owlqn_minimize(std::move(x), l1, eval, opts);
  ModelParams fitted = unpack(result.x);

  // owlqn is monotone already; re-check on the exact objective used elsewhere.
  LikelihoodContext beforeCtx{net, features, start, circles, lambda};
  LikelihoodContext afterCtx{net, features, fitted, circles, lambda};
  double before = log_likelihood(beforeCtx) - regularizer(start, lambda);
  double after = log_likelihood(afterCtx) - regularizer(fitted, lambda);
  return after >= before ? fitted : start;
}

namespace detail {

namespace {

// One coordinate-ascent run from the Alg.-1 initialization; fit() wraps this
// in restarts. Returns the final regularized objective through objOut.
FitResult single_run(const EgoNetwork& net, const EdgeFeatureCache& features,
                     const FitConfig& config, const std::vector<std::vector<std::int8_t>>& clamps,
                     const Memberships* initial, const FitObserver& observer, double& objOut) {
  if (net.node_count() == 0) throw std::runtime_error("cannot fit an empty network");
  const int K = config.k;
  const int F1 = features.dim();
  const int n = net.node_count();

  Rng rng(config.seed);
  ModelParams params = ModelParams::random_init(K, F1, rng);
  Memberships memb = initial ? *initial : Memberships(K, n);

  auto objective = [&](const ModelParams& p, const Memberships& m) {
    LikelihoodContext ctx{net, features, p, m, config.lambda};
    return log_likelihood(ctx) - regularizer(p, config.lambda);
  };
  double obj = objective(params, memb);

  FitResult result;
  result.converged = false;
  std::vector<int> order(static_cast<std::size_t>(K));
  std::iota(order.begin(), order.end(), 0);

  std::vector<std::uint8_t> proposalRow(static_cast<std::size_t>(n));
  // Runs circle k's pbopt update against the current parameters and accepts
  // the proposal only if the global objective does not drop.
  auto update_circle = [&](int k, int iter, bool notify = true) {
    LikelihoodContext ctx{net, features, params, memb, config.lambda};
    PairwiseEnergy energy = build_circle_energy(k, ctx);

    Labeling warm = Labeling::filled(n, 0);
    for (int i = 0; i < n; ++i)
      warm.values[static_cast<std::size_t>(i)] = memb.contains(k, i) ? 1 : 0;

    Labeling proposal = clamps.empty()
                            ? maximize(energy, warm)
                            : maximize_clamped(energy, warm, clamps[static_cast<std::size_t>(k)]);
    if (proposal.values == warm.values) return false;

    for (int i = 0; i < n; ++i)
      proposalRow[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(proposal.values[static_cast<std::size_t>(i)]);
    Memberships trial = memb;
    trial.assign_row(k, proposalRow);
    double trialObj = objective(params, trial);
    // The solver's guarantee is per-energy; acceptance re-checks on the
    // global objective so the outer loop is monotone no matter what.
    if (trialObj < obj) return false;
    memb = std::move(trial);
    obj = trialObj;
    if (notify && observer) observer(iter, memb, obj);
    return true;
  };

  bool lastChanged = true;
  for (int iter = 1; iter <= config.maxOuterIters; ++iter) {
    result.iterations = iter;
    bool changed = false;

    rng.shuffle(order);
    for (int k : order) changed = update_circle(k, iter) || changed;

    ModelParams updated = quasi_newton_step(net, features, params, memb, config.lambda, config.inner, config.alphaMin, config.alphaMax, config.nonnegativeWeights);
    double updatedObj = objective(updated, memb);
    if (updatedObj >= obj) {
      params = std::move(updated);
      obj = updatedObj;
      if (observer) observer(iter, memb, obj);
    }

    // Probe pass. Plain coordinate ascent parks in degenerate basins: a
    // circle whose weights drifted into an explain-nothing (or blob) role is
    // a coordinate-wise fixed point, because its own metric is what keeps its
    // membership frozen. Probe each circle with a constant-only metric: under
    // theta_k = (1; 0...) the membership update collects exactly the cluster
    // of edges the rest of the model under-explains. The probe, the
    // membership update, and a full parameter re-fit form one compound
    // proposal, kept only if the final objective strictly improves. Iteration
    // one therefore ends with a greedy residual decomposition, one cluster
    // per circle; later passes are skipped once an iteration changes nothing,
    // since rerunning them would reproduce the previous rejections.
    // Full-circle probing pays while the decomposition is still forming;
    // afterwards only dead circles are worth the re-fit cost.
    if (iter == 1 || lastChanged) {
      for (int k : order) {
        if (iter > 3 && memb.size_of(k) > 0) continue;
        // Candidate metrics: the constant-only probe, then a copy of the
        // biggest other circle's metric. The copy makes its residual core
        // visible, which is how a nested sub-circle gets its own circle.
        std::vector<std::vector<double>> candidates;
        {
          std::vector<double> constant(static_cast<std::size_t>(F1), 0.0);
          constant[0] = 1.0;
          candidates.push_back(std::move(constant));
        }
        int biggest = -1;
        for (int j = 0; j < K; ++j)
          if (j != k && memb.size_of(j) > (biggest < 0 ? 0 : memb.size_of(biggest))) biggest = j;
        if (biggest >= 0) candidates.push_back(params.theta[static_cast<std::size_t>(biggest)]);

        for (auto& candidate : candidates) {
          ModelParams savedParams = params;
          Memberships savedMemb = memb;
          double savedObj = obj;
          params.theta[static_cast<std::size_t>(k)] = std::move(candidate);
          obj = objective(params, memb);
          bool moved = update_circle(k, iter, /*notify=*/false);  // observer fires on acceptance
          if (moved) {
            // A coarse re-fit decides accept/reject; accepted circles get the
            // full-budget parameter step next iteration anyway.
            OwlqnOptions probeOptions = config.inner;
            probeOptions.maxIterations = std::min(probeOptions.maxIterations, 40);
            ModelParams refit = quasi_newton_step(net, features, params, memb, config.lambda,
                                                  probeOptions, config.alphaMin, config.alphaMax,
                                                  config.nonnegativeWeights);
            double refitObj = objective(refit, memb);
            if (refitObj > savedObj + 1e-9 * std::max(1.0, std::abs(savedObj))) {
              params = std::move(refit);
              obj = refitObj;
              changed = true;
              if (observer) observer(iter, memb, obj);
              break;
            }
          }
          params = std::move(savedParams);
          memb = std::move(savedMemb);
          obj = savedObj;
        }
      }
    }


    lastChanged = changed;
    if (!changed) {
      result.converged = true;
      break;
    }
  }

  // Pruning sweep: membership of a feature-dissimilar node is likelihood-flat
  // (its d_k flips multiply near-zero dots), and such phantoms accumulate
  // while the metrics are still immature, surviving later updates only
  // because ties keep the warm start. Re-running each update from an empty
  // warm start resolves exactly those ties toward leaner circles; guarded
  // acceptance keeps it monotone.
  for (int k = 0; k < K; ++k) {
    LikelihoodContext ctx{net, features, params, memb, config.lambda};
    PairwiseEnergy energy = build_circle_energy(k, ctx);
    Labeling zeros = Labeling::filled(n, 0);
    Labeling proposal = clamps.empty()
                            ? maximize(energy, zeros)
                            : maximize_clamped(energy, zeros, clamps[static_cast<std::size_t>(k)]);
    for (int i = 0; i < n; ++i)
      proposalRow[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(proposal.values[static_cast<std::size_t>(i)]);
    Memberships trial = memb;
    trial.assign_row(k, proposalRow);
    double trialObj = objective(params, trial);
    if (trialObj >= obj && !(trial == memb)) {
      memb = std::move(trial);
      obj = trialObj;
      if (observer) observer(result.iterations, memb, obj);
    }
  }

  LikelihoodContext finalCtx{net, features, params, memb, config.lambda};
  result.logLikelihood = log_likelihood(finalCtx);
  objOut = obj;
  result.params = std::move(params);
  result.circles = memb.to_circles(net);
  result.bic = net.edge_count() >= 1
                   ? bic_score(result.logLikelihood, K * (F1 + 1), net.edge_count())
                   : std::numeric_limits<double>::quiet_NaN();
  return result;
}

}  // namespace

FitResult fit_with_clamps(const EgoNetwork& net, const EdgeFeatureCache& features,
                          const FitConfig& config,
                          const std::vector<std::vector<std::int8_t>>& clamps,
                          const Memberships* initial, const FitObserver& observer) {
  const int restarts = std::max(1, config.restarts);

  // Buffer each run's observer stream and replay the winner's, so callers see
  // exactly the accepted-step history (monotone by construction) of the fit
  // that gets returned.
  struct Event {
    int iter;
    Memberships memb;
    double objective;
  };

  std::optional<FitResult> best;
  double bestObj = -std::numeric_limits<double>::infinity();
  std::vector<Event> bestTrace;
  for (int r = 0; r < restarts; ++r) {
    FitConfig sub = config;
    if (r > 0) sub.seed = Rng(config.seed).fork(static_cast<std::uint64_t>(r)).next();
    std::vector<Event> trace;
    FitObserver buffer;
    if (observer)
      buffer = [&trace](int iter, const Memberships& m, double objective) {
        trace.push_back({iter, m, objective});
      };
    double obj = 0.0;
    FitResult candidate = single_run(net, features, sub, clamps, initial, buffer, obj);
    if (!best || obj > bestObj) {
      best = std::move(candidate);
      bestObj = obj;
      bestTrace = std::move(trace);
    }
  }
  if (observer)
    for (const auto& e : bestTrace) observer(e.iter, e.memb, e.objective);
  return std::move(*best);
}

}  // namespace detail

FitResult fit(const EgoNetwork& net, const EdgeFeatureCache& features, const FitConfig& config,
              const FitObserver& observer) {
  if (config.autoK) return select_k(net, features, config, observer);
  return detail::fit_with_clamps(net, features, config, {}, nullptr, observer);
}

FitResult select_k(const EgoNetwork& net, const EdgeFeatureCache& features, const FitConfig& config,
                   const FitObserver& observer) {
  if (net.edge_count() < 1) throw std::runtime_error("BIC sweep needs at least one edge");
  std::optional<FitResult> best;
  for (int k = 1; k <= config.kMax; ++k) {
    FitConfig sub = config;
    sub.autoK = false;
    sub.k = k;
    sub.seed = Rng(config.seed).fork(static_cast<std::uint64_t>(k)).next();
    FitResult candidate = fit(net, features, sub, observer);
    if (!best || candidate.bic < best->bic) best = std::move(candidate);
  }
  return std::move(*best);
}

FitResult drop_empty_circles(FitResult result) {
  FitResult out;
  out.logLikelihood = result.logLikelihood;
  out.bic = result.bic;
  out.iterations = result.iterations;
  out.converged = result.converged;
  for (std::size_t k = 0; k < result.circles.circles.size(); ++k) {
    if (result.circles.circles[k].empty()) continue;
    out.circles.circles.push_back(std::move(result.circles.circles[k]));
    out.params.theta.push_back(std::move(result.params.theta[k]));
    out.params.alpha.push_back(result.params.alpha[k]);
  }
  return out;
}

}  // namespace circles
