#include <doctest.h>

#include <cmath>

#include "circles/model.hpp"
#include "support/oracles.hpp"

using namespace circles;

namespace {

struct Fixture {
  oracle::Instance inst;
  EdgeFeatureCache cache;
  Memberships memb;

  explicit Fixture(oracle::Instance i, FeatureScheme scheme = FeatureScheme::phi1)
      : inst(std::move(i)),
        cache(inst.network, inst.profiles, scheme),
        memb(Memberships::from_circles(inst.circles, inst.network)) {}

  LikelihoodContext ctx(double lambda = 0.0) const {
    return LikelihoodContext{inst.network, cache, inst.params, memb, lambda};
  }
};

}  // namespace

TEST_CASE("d_coeff follows the membership indicator") {
  Rng rng(3);
  Fixture fx(oracle::random_instance(6, 1, 3, rng));
  fx.inst.circles.circles[0] = {0, 1, 2};
  fx.memb = Memberships::from_circles(fx.inst.circles, fx.inst.network);

  auto ctx = fx.ctx();
  fx.inst.params.alpha[0] = 1.0;
  CHECK(d_coeff(ctx, 0, 0, 1) == 1.0);
  CHECK(d_coeff(ctx, 0, 0, 4) == -1.0);
  fx.inst.params.alpha[0] = 0.5;
  CHECK(d_coeff(ctx, 0, 0, 4) == -0.5);
}

TEST_CASE("big_phi trivial cases and two-term hand evaluation") {
  std::vector<NodeId> nodes{0, 1};
  EgoNetwork net(nodes, {}, false);
  std::vector<FeaturePath> names{{{"c", "a"}}, {{"c", "b"}}};
  ProfileStore profiles(names, {0, 0});
  profiles.add_node(0, {1, 0});
  profiles.add_node(1, {0, 1});
  EdgeFeatureCache cache(net, profiles, FeatureScheme::phi1);
  std::vector<double> scratch;

  // K = 0: empty sum
  ModelParams none = ModelParams::zeros(0, 3);
  Memberships memb0(0, 2);
  CircleAssignment c0;
  LikelihoodContext ctx0{net, cache, none, memb0, 0.0};
  CHECK(big_phi(ctx0, 0, 1, scratch) == 0.0);

  // K = 1, both members, theta = e_0
  ModelParams p1 = ModelParams::zeros(1, 3);
  p1.theta[0][0] = 1.0;
  Memberships memb1(1, 2);
  memb1.set(0, 0, true);
  memb1.set(0, 1, true);
  LikelihoodContext ctx1{net, cache, p1, memb1, 0.0};
  CHECK(big_phi(ctx1, 0, 1, scratch) == 1.0);

  // K = 2 mixed membership equals the term-by-term sum.
  ModelParams p2 = ModelParams::zeros(2, 3);
  p2.theta[0] = {0.5, -1.0, 2.0};
  p2.theta[1] = {-0.25, 0.75, 0.5};
  p2.alpha = {0.8, 1.3};
  Memberships memb2(2, 2);
  memb2.set(0, 0, true);
  memb2.set(0, 1, true);
  memb2.set(1, 0, true);  // node 1 outside circle 1
  LikelihoodContext ctx2{net, cache, p2, memb2, 0.0};
  // phi(0,1) = (1, -1, -1): dot0 = 0.5 + 1 - 2 = -0.5 (both in), dot1 = -0.25 - 0.75 - 0.5 = -1.5
  const double expected = 1.0 * (-0.5) + (-1.3) * (-1.5);
  CHECK(big_phi(ctx2, 0, 1, scratch) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("edge probabilities are the logistic of Phi") {
  CHECK(std::exp(edge_log_probs(0.0).edge) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::exp(edge_log_probs(1.0).edge) == doctest::Approx(0.731059).epsilon(1e-6));
  CHECK(std::exp(edge_log_probs(-2.0).edge) == doctest::Approx(0.119203).epsilon(1e-6));
}

TEST_CASE("edge probabilities stay finite and normalized out to |Phi| = 1e4") {
  for (double phi : {-1e4, -500.0, -3.0, 0.0, 1.2, 500.0, 1e4}) {
    auto lp = edge_log_probs(phi);
    REQUIRE(std::isfinite(lp.nonEdge));
    REQUIRE(lp.edge <= 0.0);
    double total = std::exp(lp.edge) + std::exp(lp.nonEdge);
    REQUIRE(total == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("log-likelihood on two-node graphs") {
  std::vector<NodeId> nodes{0, 1};
  std::vector<FeaturePath> names{{{"c", "a"}}};
  auto makeProfiles = [&]() {
    ProfileStore p(names, {0});
    p.add_node(0, {0});
    p.add_node(1, {0});
    return p;
  };
  ModelParams none = ModelParams::zeros(0, 2);
  Memberships memb(0, 2);

  EgoNetwork noEdge(nodes, {}, false);
  auto profiles1 = makeProfiles();
  EdgeFeatureCache cache1(noEdge, profiles1, FeatureScheme::phi1);
  LikelihoodContext ctx1{noEdge, cache1, none, memb, 0.0};
  CHECK(log_likelihood(ctx1) == doctest::Approx(-std::log(2.0)).epsilon(1e-12));

  EgoNetwork oneEdge(nodes, {{0, 1}}, false);
  auto profiles2 = makeProfiles();
  EdgeFeatureCache cache2(oneEdge, profiles2, FeatureScheme::phi1);
  LikelihoodContext ctx2{oneEdge, cache2, none, memb, 0.0};
  CHECK(log_likelihood(ctx2) == doctest::Approx(-std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("log-likelihood equals the naive per-pair oracle") {
  Rng rng(101);
  for (int trial = 0; trial < 20; ++trial) {
    const bool directed = trial % 4 == 3;
    auto inst = oracle::random_instance(8, 2, 5, rng, 0.3, 0.4, directed);
    Fixture fx(std::move(inst));
    double fast = log_likelihood(fx.ctx());
    double naive = oracle::naive_log_likelihood(fx.inst.network, fx.inst.profiles,
                                                FeatureScheme::phi1, fx.inst.params,
                                                fx.inst.circles);
    REQUIRE(fast == doctest::Approx(naive).epsilon(1e-12));
  }
}

TEST_CASE("regularizer is lambda times the theta L1 norm") {
  ModelParams p = ModelParams::zeros(1, 2);
  CHECK(regularizer(p, 5.0) == 0.0);
  p.theta[0] = {1.0, -2.0};
  CHECK(regularizer(p, 10.0) == doctest::Approx(30.0));
  CHECK(regularizer(p, 0.0) == 0.0);
}

TEST_CASE("gradient at Phi=0 on a single non-edge pair is -phi/2") {
  std::vector<NodeId> nodes{0, 1};
  EgoNetwork net(nodes, {}, false);
  std::vector<FeaturePath> names{{{"c", "a"}}, {{"c", "b"}}};
  ProfileStore profiles(names, {0, 0});
  profiles.add_node(0, {1, 0});
  profiles.add_node(1, {0, 0});
  EdgeFeatureCache cache(net, profiles, FeatureScheme::phi1);

  ModelParams p = ModelParams::zeros(1, 3);  // theta = 0, alpha = 1
  Memberships memb(1, 2);
  memb.set(0, 0, true);
  memb.set(0, 1, true);
  LikelihoodContext ctx{net, cache, p, memb, 0.0};
  auto g = gradients(ctx);
  std::vector<double> scratch;
  auto phi = cache.phi(0, 1, scratch);
  for (int f = 0; f < 3; ++f)
    CHECK(g.theta[0][static_cast<std::size_t>(f)] ==
          doctest::Approx(-phi[static_cast<std::size_t>(f)] / 2).epsilon(1e-12));
}

TEST_CASE("analytic gradients match central finite differences") {
  Rng rng(202);
  for (int trial = 0; trial < 10; ++trial) {
    auto inst = oracle::random_instance(10, 3, 4, rng);
    Fixture fx(std::move(inst));
    auto analytic = gradients(fx.ctx());
    auto fd = oracle::finite_difference_gradients(fx.inst.network, fx.cache, fx.inst.params, fx.memb);
    for (int k = 0; k < 3; ++k) {
      for (std::size_t f = 0; f < analytic.theta[static_cast<std::size_t>(k)].size(); ++f) {
        double a = analytic.theta[static_cast<std::size_t>(k)][f];
        double b = fd.theta[static_cast<std::size_t>(k)][f];
        REQUIRE(std::abs(a - b) <= 1e-5 * std::max({1.0, std::abs(a), std::abs(b)}));
      }
      double a = analytic.alpha[static_cast<std::size_t>(k)];
      double b = fd.alpha[static_cast<std::size_t>(k)];
      REQUIRE(std::abs(a - b) <= 1e-5 * std::max({1.0, std::abs(a), std::abs(b)}));
    }
  }
}

TEST_CASE("alpha gradient on an empty graph with empty circles matches finite differences") {
  std::vector<NodeId> nodes{0, 1, 2};
  EgoNetwork net(nodes, {}, false);
  std::vector<FeaturePath> names{{{"c", "a"}}, {{"c", "b"}}};
  ProfileStore profiles(names, {1, 0});
  Rng rng(5);
  for (NodeId id : nodes) profiles.add_node(id, {rng.coin(), rng.coin()});
  EdgeFeatureCache cache(net, profiles, FeatureScheme::phi1);

  ModelParams p = ModelParams::zeros(1, 3);
  p.theta[0] = {0.7, -0.4, 1.1};
  Memberships memb(1, 3);  // empty circle
  LikelihoodContext ctx{net, cache, p, memb, 0.0};
  auto g = gradients(ctx);
  auto fd = oracle::finite_difference_gradients(net, cache, p, memb);
  CHECK(g.alpha[0] == doctest::Approx(fd.alpha[0]).epsilon(1e-6));
}

TEST_CASE("log probabilities of edge and non-edge sum to one") {
  Rng rng(303);
  auto inst = oracle::random_instance(9, 2, 4, rng);
  Fixture fx(std::move(inst));
  auto ctx = fx.ctx();
  for_each_pair(fx.inst.network, [&](int i, int j) {
    auto lp = edge_log_probs(ctx, i, j);
    REQUIRE(std::exp(lp.edge) + std::exp(lp.nonEdge) == doctest::Approx(1.0).epsilon(1e-12));
  });
}

TEST_CASE("log-likelihood is invariant under node relabeling") {
  Rng rng(404);
  auto inst = oracle::random_instance(9, 2, 4, rng);
  double base;
  {
    Fixture fx(std::move(inst));
    base = log_likelihood(fx.ctx());
  }

  // Rebuild the same instance with permuted ids: id -> 100 - id.
  Rng rng2(404);
  auto inst2 = oracle::random_instance(9, 2, 4, rng2);
  auto remap = [](NodeId id) { return NodeId(100 - id); };
  std::vector<NodeId> nodes;
  for (NodeId id : inst2.network.nodes()) nodes.push_back(remap(id));
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (auto [x, y] : inst2.network.edges())
    edges.emplace_back(remap(inst2.network.node_at(x)), remap(inst2.network.node_at(y)));
  EgoNetwork permNet(nodes, edges, false);
  ProfileStore permProfiles(inst2.profiles.feat_names(),
                            {inst2.profiles.ego_bits().begin(), inst2.profiles.ego_bits().end()});
  for (NodeId id : inst2.network.nodes()) {
    auto bits = inst2.profiles.bits(id);
    permProfiles.add_node(remap(id), {bits.begin(), bits.end()});
  }
  CircleAssignment permCircles;
  for (const auto& c : inst2.circles.circles) {
    std::vector<NodeId> mapped;
    for (NodeId id : c) mapped.push_back(remap(id));
    permCircles.circles.push_back(mapped);
  }
  permCircles.normalize();
  EdgeFeatureCache cache(permNet, permProfiles, FeatureScheme::phi1);
  Memberships memb = Memberships::from_circles(permCircles, permNet);
  LikelihoodContext ctx{permNet, cache, inst2.params, memb, 0.0};
  CHECK(log_likelihood(ctx) == doctest::Approx(base).epsilon(1e-9));
}

TEST_CASE("an empty circle with zero weights leaves the likelihood unchanged") {
  Rng rng(505);
  auto inst = oracle::random_instance(8, 2, 4, rng);
  Fixture fx(std::move(inst));
  double base = log_likelihood(fx.ctx());

  ModelParams extended = fx.inst.params;
  extended.theta.push_back(std::vector<double>(static_cast<std::size_t>(extended.dim()), 0.0));
  extended.alpha.push_back(1.0);
  CircleAssignment circles = fx.inst.circles;
  circles.circles.push_back({});
  Memberships memb = Memberships::from_circles(circles, fx.inst.network);
  LikelihoodContext ctx{fx.inst.network, fx.cache, extended, memb, 0.0};
  CHECK(log_likelihood(ctx) == doctest::Approx(base).epsilon(1e-12));
}
