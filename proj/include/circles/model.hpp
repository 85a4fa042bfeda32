#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "circles/features.hpp"
#include "circles/types.hpp"

namespace circles {

// Everything one likelihood evaluation needs: the graph, the pair features,
// the current parameters and memberships, and the L1 strength.
struct LikelihoodContext {
  const EgoNetwork& network;
  const EdgeFeatureCache& features;
  const ModelParams& params;
  const Memberships& circles;
  double lambda = 0.0;
};

// log(1 + e^x), safe for |x| well beyond 1e4.
inline double softplus(double x) {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

// Logistic sigma(x) = e^x / (1 + e^x).
inline double logistic(double x) {
  return x > 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// d_k(e): 1 when both endpoints sit in circle k, else -alpha_k.
inline double d_coeff(const Memberships& circles, const ModelParams& params, int k, int x, int y) {
  return (circles.contains(k, x) && circles.contains(k, y)) ? 1.0
                                                            : -params.alpha[static_cast<std::size_t>(k)];
}
double d_coeff(const LikelihoodContext& ctx, int k, int x, int y);

// Phi(e) = sum_k d_k(e) <phi(e), theta_k>.
double big_phi(const LikelihoodContext& ctx, int x, int y, std::vector<double>& scratch);

struct EdgeLogProbs {
  double edge;     // log p(e in E)
  double nonEdge;  // log p(e not in E)
};
inline EdgeLogProbs edge_log_probs(double phi) {
  double z = softplus(phi);
  return {phi - z, -z};
}
EdgeLogProbs edge_log_probs(const LikelihoodContext& ctx, int x, int y);

// Eq-style log-likelihood over the pair domain (unordered pairs when
// undirected, ordered otherwise; never self-pairs).
double log_likelihood(const LikelihoodContext& ctx);

// lambda * sum_k |theta_k|_1; alphas are never regularized.
double regularizer(const ModelParams& params, double lambda);

// Unregularized analytic gradients; the L1 subgradient is the optimizer's
// business.
struct Gradients {
  std::vector<std::vector<double>> theta;
  std::vector<double> alpha;
};
Gradients gradients(const LikelihoodContext& ctx);

// One pass computing both; returns the log-likelihood.
double log_likelihood_and_gradients(const LikelihoodContext& ctx, Gradients& out);

}  // namespace circles
