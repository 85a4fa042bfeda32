#include "circles/model.hpp"

#include <stdexcept>

namespace circles {

double d_coeff(const LikelihoodContext& ctx, int k, int x, int y) {
  return d_coeff(ctx.circles, ctx.params, k, x, y);
}

double big_phi(const LikelihoodContext& ctx, int x, int y, std::vector<double>& scratch) {
  auto phi = ctx.features.phi(x, y, scratch);
  double sum = 0.0;
  for (int k = 0; k < ctx.params.circle_count(); ++k)
    sum += d_coeff(ctx, k, x, y) * dot(phi, ctx.params.theta[static_cast<std::size_t>(k)]);
  return sum;
}

EdgeLogProbs edge_log_probs(const LikelihoodContext& ctx, int x, int y) {
  std::vector<double> scratch;
  return edge_log_probs(big_phi(ctx, x, y, scratch));
}

double log_likelihood(const LikelihoodContext& ctx) {
  std::vector<double> scratch;
  double ll = 0.0;
  for_each_pair(ctx.network, [&](int i, int j) {
    double phi = big_phi(ctx, i, j, scratch);
    if (ctx.network.has_edge_index(i, j)) ll += phi;
    ll -= softplus(phi);
  });
  return ll;
}

double regularizer(const ModelParams& params, double lambda) {
  double sum = 0.0;
  for (const auto& t : params.theta)
    for (double w : t) sum += std::abs(w);
  return lambda * sum;
}

Gradients gradients(const LikelihoodContext& ctx) {
  Gradients g;
  log_likelihood_and_gradients(ctx, g);
  return g;
}

double log_likelihood_and_gradients(const LikelihoodContext& ctx, Gradients& out) {
  const int K = ctx.params.circle_count();
  const int F1 = ctx.params.dim();
  out.theta.assign(static_cast<std::size_t>(K), std::vector<double>(static_cast<std::size_t>(F1), 0.0));
  out.alpha.assign(static_cast<std::size_t>(K), 0.0);

  std::vector<double> scratch;
  double ll = 0.0;
  for_each_pair(ctx.network, [&](int i, int j) {
    auto phi = ctx.features.phi(i, j, scratch);
    double sum = 0.0;
    for (int k = 0; k < K; ++k)
      sum += d_coeff(ctx, k, i, j) * dot(phi, ctx.params.theta[static_cast<std::size_t>(k)]);
    const bool isEdge = ctx.network.has_edge_index(i, j);
    ll += (isEdge ? sum : 0.0) - softplus(sum);

    const double sig = logistic(sum);
    for (int k = 0; k < K; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      const double dk = d_coeff(ctx, k, i, j);
      const double dotK = dot(phi, ctx.params.theta[ku]);
      const bool bothIn = ctx.circles.contains(k, i) && ctx.circles.contains(k, j);
      // - d_k phi sigma(Phi) over all pairs, + d_k phi over edges
      const double coef = dk * (isEdge ? 1.0 - sig : -sig);
      auto& gt = out.theta[ku];
      for (int f = 0; f < F1; ++f) gt[static_cast<std::size_t>(f)] += coef * phi[static_cast<std::size_t>(f)];
      if (!bothIn) out.alpha[ku] += dotK * (isEdge ? sig - 1.0 : sig);
    }
  });
  return ll;
}

}  // namespace circles
