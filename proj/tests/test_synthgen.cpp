#include <doctest.h>

#include <cmath>

#include "circles/model.hpp"
#include "circles/synthgen.hpp"
#include "support/oracles.hpp"

using namespace circles;

TEST_CASE("no circles and zero separation give coin-flip edges") {
  PlantedSpec spec;
  spec.n = 60;
  spec.k = 0;
  spec.separation = 0.0;
  spec.seed = 5;
  auto inst = generate(spec);
  const double pairs = static_cast<double>(inst.network.pair_count());
  const double density = static_cast<double>(inst.network.edge_count()) / pairs;
  // 3-sigma binomial band around 0.5
  const double band = 3.0 * std::sqrt(0.25 / pairs);
  CHECK(std::abs(density - 0.5) <= band);
}

TEST_CASE("empirical edge frequency tracks logistic(Phi) per pair class") {
  // Phi varies draw to draw (non-member block bits are coin flips), so this is
  // a calibration check: within each pair class, the edge count over many
  // resamples must match the summed logistic(Phi) of the realized instances.
  PlantedSpec spec;
  spec.n = 24;
  spec.k = 2;
  spec.structure = OverlapStructure::disjoint;
  spec.separation = 4.0;

  struct Bucket {
    double expected = 0.0;   // sum of logistic(Phi)
    double variance = 0.0;   // sum of p(1-p)
    std::int64_t edges = 0;
    std::int64_t pairs = 0;
  };
  Bucket in, out;

  const int resamples = 400;  // x 276 pairs each ~ 1.1e5 draws
  for (int t = 0; t < resamples; ++t) {
    PlantedSpec s2 = spec;
    s2.seed = 1000 + static_cast<std::uint64_t>(t);
    auto inst = generate(s2);
    Memberships memb = Memberships::from_circles(inst.circles, inst.network);
    EdgeFeatureCache cache(inst.network, inst.profiles, FeatureScheme::phi1);
    LikelihoodContext ctx{inst.network, cache, inst.params, memb, 0.0};
    std::vector<double> scratch;
    for_each_pair(inst.network, [&](int i, int j) {
      const double p = logistic(big_phi(ctx, i, j, scratch));
      bool shared = false;
      for (int k = 0; k < 2; ++k) shared = shared || (memb.contains(k, i) && memb.contains(k, j));
      Bucket& b = shared ? in : out;
      b.expected += p;
      b.variance += p * (1 - p);
      b.edges += inst.network.has_edge_index(i, j) ? 1 : 0;
      ++b.pairs;
    });
  }

  for (const Bucket* b : {&in, &out}) {
    REQUIRE(b->pairs > 1000);
    const double sd = std::sqrt(b->variance);
    CHECK(std::abs(double(b->edges) - b->expected) <= 3.0 * sd + 1.0);
  }
  // The classes must actually separate: dense inside, sparse elsewhere.
  const double inDensity = double(in.edges) / double(in.pairs);
  const double outDensity = double(out.edges) / double(out.pairs);
  CHECK(inDensity > 0.5);
  CHECK(outDensity < 0.2);
  CHECK(inDensity - outDensity > 0.35);
}

TEST_CASE("nested structure produces strict containment") {
  PlantedSpec spec;
  spec.n = 40;
  spec.k = 3;
  spec.structure = OverlapStructure::nested;
  spec.seed = 9;
  auto inst = generate(spec);
  bool contained = false;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      if (a == b) continue;
      const auto& ca = inst.circles.circles[static_cast<std::size_t>(a)];
      const auto& cb = inst.circles.circles[static_cast<std::size_t>(b)];
      if (ca.size() < cb.size() &&
          std::includes(cb.begin(), cb.end(), ca.begin(), ca.end()))
        contained = true;
    }
  CHECK(contained);
}

TEST_CASE("generation is reproducible from the seed") {
  PlantedSpec spec;
  spec.n = 30;
  spec.k = 2;
  spec.seed = 123;
  auto a = generate(spec);
  auto b = generate(spec);
  CHECK(a.network.edges() == b.network.edges());
  CHECK(a.circles.circles == b.circles.circles);
  CHECK(a.params.theta == b.params.theta);
  for (NodeId id : a.network.nodes()) {
    auto ba = a.profiles.bits(id);
    auto bb = b.profiles.bits(id);
    CHECK(std::vector<std::uint8_t>(ba.begin(), ba.end()) ==
          std::vector<std::uint8_t>(bb.begin(), bb.end()));
  }
}

TEST_CASE("summarize reports containment, sizes, and densities") {
  std::vector<NodeId> nodes{0, 1, 2, 3, 4, 5};
  EgoNetwork net(nodes, {{0, 1}, {2, 3}, {0, 5}}, false);

  CircleAssignment disjoint;
  disjoint.circles = {{0, 1, 2}, {3, 4, 5}};
  auto stats = summarize(net, disjoint);
  CHECK(stats.maxContainment == std::vector<double>{0.0, 0.0});
  CHECK(stats.sizes == std::vector<int>{3, 3});

  CircleAssignment nested;
  nested.circles = {{0, 1}, {0, 1, 2, 3}};
  auto stats2 = summarize(net, nested);
  CHECK(stats2.maxContainment[0] == 1.0);
  CHECK(stats2.maxContainment[1] == doctest::Approx(0.5));

  // Densities match a hand count: pairs sharing a circle for `nested`:
  // {01,02,03,12,13,23} -> 6 pairs, edges 01 and 23 inside -> 2/6; outside
  // pairs: 15 - 6 = 9, edges {05} -> 1/9.
  CHECK(stats2.densityIn == doctest::Approx(2.0 / 6.0));
  CHECK(stats2.densityOut == doctest::Approx(1.0 / 9.0));
}

TEST_CASE("summarize matches a naive recomputation on random instances") {
  Rng rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    PlantedSpec spec;
    spec.n = 25;
    spec.k = 3;
    spec.structure = OverlapStructure::mixed;
    spec.seed = 400 + static_cast<std::uint64_t>(trial);
    auto inst = generate(spec);
    auto stats = summarize(inst.network, inst.circles);

    for (int a = 0; a < 3; ++a) {
      const auto& ca = inst.circles.circles[static_cast<std::size_t>(a)];
      double best = 0.0;
      for (int b = 0; b < 3; ++b) {
        if (a == b) continue;
        const auto& cb = inst.circles.circles[static_cast<std::size_t>(b)];
        std::size_t common = 0;
        for (NodeId id : ca)
          if (std::find(cb.begin(), cb.end(), id) != cb.end()) ++common;
        best = std::max(best, double(common) / double(ca.size()));
      }
      REQUIRE(stats.maxContainment[static_cast<std::size_t>(a)] == doctest::Approx(best));
    }
  }
}

TEST_CASE("the planted configuration beats size-matched random circles") {
  int wins = 0, trials = 20;
  Rng shuffler(99);
  for (int t = 0; t < trials; ++t) {
    PlantedSpec spec;
    spec.n = 40;
    spec.k = 2;
    spec.structure = OverlapStructure::disjoint;
    spec.separation = 4.0;
    spec.seed = 700 + static_cast<std::uint64_t>(t);
    auto inst = generate(spec);

    double llTrue = oracle::naive_log_likelihood(inst.network, inst.profiles, FeatureScheme::phi1,
                                                 inst.params, inst.circles);

    CircleAssignment random;
    for (const auto& c : inst.circles.circles) {
      std::vector<NodeId> pool = inst.network.nodes();
      shuffler.shuffle(pool);
      pool.resize(c.size());
      std::sort(pool.begin(), pool.end());
      random.circles.push_back(pool);
    }
    double llRandom = oracle::naive_log_likelihood(inst.network, inst.profiles, FeatureScheme::phi1,
                                                   inst.params, random);
    if (llTrue >= llRandom) ++wins;
  }
  CHECK(wins >= 19);  // >= 95% of seeds
}
