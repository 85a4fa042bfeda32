#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "circles/dataset.hpp"
#include "circles/types.hpp"

using namespace circles;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("circles_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p);
  out << content;
}

}  // namespace

TEST_CASE("edges and feat files parse into network and profiles") {
  auto dir = temp_dir("parse");
  write_file(dir / "9.edges", "1 2\n2 3\n");
  write_file(dir / "9.feat", "1 1 0\n2 0 1\n3 1 1\n");

  auto data = load_ego_network(dir, "9");
  CHECK(data.network.node_count() == 3);
  CHECK(data.network.edge_count() == 2);
  CHECK_FALSE(data.network.directed());
  CHECK(data.network.has_edge(1, 2));
  CHECK(data.network.has_edge(2, 1));  // symmetric query
  CHECK_FALSE(data.network.has_edge(1, 3));
  CHECK(data.profiles.leaf_count() == 2);
  CHECK_FALSE(data.groundTruth.has_value());
}

TEST_CASE("circles file parses into a circle assignment") {
  auto dir = temp_dir("circles");
  write_file(dir / "0.edges", "1 2\n");
  write_file(dir / "0.feat", "1 1\n2 0\n");
  write_file(dir / "0.circles", "circle0\t1\t2\n");

  auto data = load_ego_network(dir, "0");
  REQUIRE(data.groundTruth.has_value());
  CHECK(data.groundTruth->circles == std::vector<std::vector<NodeId>>{{1, 2}});
  CHECK(data.circleNames == std::vector<std::string>{"circle0"});
}

TEST_CASE("feature rows of unequal length are rejected with a line number") {
  auto dir = temp_dir("mismatch");
  write_file(dir / "0.edges", "1 2\n");
  write_file(dir / "0.feat", "1 1 0 1 0 1\n2 0 1 0 1\n");
  CHECK_THROWS_WITH_AS(load_ego_network(dir, "0"),
                       doctest::Contains("0.feat:2"), std::runtime_error);
}

TEST_CASE("malformed lines and unknown circle members are rejected") {
  auto dir = temp_dir("malformed");
  write_file(dir / "0.edges", "1 2\n3\n");
  write_file(dir / "0.feat", "1 1\n2 0\n");
  CHECK_THROWS_AS(load_ego_network(dir, "0"), std::runtime_error);

  write_file(dir / "0.edges", "1 2\n");
  write_file(dir / "0.circles", "c0\t1\t7\n");
  CHECK_THROWS_WITH_AS(load_ego_network(dir, "0"), doctest::Contains("unknown node id 7"),
                       std::runtime_error);
}

TEST_CASE("nodes appearing only in edges get zero feature rows") {
  auto dir = temp_dir("zerorow");
  write_file(dir / "0.edges", "1 2\n2 5\n");
  write_file(dir / "0.feat", "1 1 1\n2 0 1\n");
  auto data = load_ego_network(dir, "0");
  CHECK(data.network.node_count() == 3);
  auto bits = data.profiles.bits(5);
  CHECK(bits.size() == 2);
  CHECK(bits[0] == 0);
  CHECK(bits[1] == 0);
}

TEST_CASE("self loops are rejected") {
  auto dir = temp_dir("selfloop");
  write_file(dir / "0.edges", "1 1\n");
  write_file(dir / "0.feat", "1 1\n");
  CHECK_THROWS_AS(load_ego_network(dir, "0"), std::runtime_error);
}

TEST_CASE("pair stream matches the closed-form counts") {
  std::vector<NodeId> three{1, 2, 3};
  EgoNetwork undirected(three, {}, false);
  EgoNetwork directed(three, {}, true);
  CHECK(node_pairs(undirected).size() == 3);
  CHECK(node_pairs(directed).size() == 6);

  EgoNetwork solo({42}, {}, false);
  CHECK(node_pairs(solo).empty());

  for (int n = 1; n <= 100; ++n) {
    std::vector<NodeId> nodes;
    for (int i = 0; i < n; ++i) nodes.push_back(i);
    EgoNetwork u(nodes, {}, false);
    EgoNetwork d(nodes, {}, true);
    REQUIRE(u.pair_count() == std::int64_t(n) * (n - 1) / 2);
    REQUIRE(d.pair_count() == std::int64_t(n) * (n - 1));
    if (n <= 20) {
      REQUIRE(std::int64_t(node_pairs(u).size()) == u.pair_count());
      REQUIRE(std::int64_t(node_pairs(d).size()) == d.pair_count());
    }
  }
}

TEST_CASE("pair stream never yields self pairs") {
  std::vector<NodeId> nodes{7, 8, 9, 10};
  for (bool directed : {false, true}) {
    EgoNetwork net(nodes, {}, directed);
    for (auto [x, y] : node_pairs(net)) REQUIRE(x != y);
  }
}

TEST_CASE("dataset round trip reproduces networks and circles exactly") {
  Rng rng(20240801);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(12));
    std::vector<NodeId> nodes;
    for (int i = 0; i < n; ++i) nodes.push_back(i * 3 + 1);  // sparse ids
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (rng.bernoulli(0.4)) edges.emplace_back(nodes[i], nodes[j]);
    EgoNetwork net(nodes, edges, false);

    const int L = 1 + static_cast<int>(rng.below(5));
    std::vector<FeaturePath> names;
    for (int l = 0; l < L; ++l)
      names.push_back(FeaturePath{{"c" + std::to_string(l % 2), "v" + std::to_string(l)}});
    std::vector<std::uint8_t> ego;
    for (int l = 0; l < L; ++l) ego.push_back(rng.coin());
    ProfileStore profiles(names, ego);
    for (NodeId id : nodes) {
      std::vector<std::uint8_t> bits;
      for (int l = 0; l < L; ++l) bits.push_back(rng.coin());
      profiles.add_node(id, bits);
    }

    CircleAssignment circles;
    circles.circles.resize(2);
    for (NodeId id : nodes)
      for (int k = 0; k < 2; ++k)
        if (rng.bernoulli(0.5)) circles.circles[static_cast<std::size_t>(k)].push_back(id);
    circles.normalize();

    EgoDataset data{std::move(net), std::move(profiles), circles, {"a", "b"}, "7"};
    auto dir = temp_dir("roundtrip" + std::to_string(trial));
    write_ego_network(dir, data);
    auto back = load_ego_network(dir, "7");

    REQUIRE(back.network.nodes() == data.network.nodes());
    REQUIRE(back.network.edges() == data.network.edges());
    REQUIRE(back.groundTruth.has_value());
    REQUIRE(back.groundTruth->circles == circles.circles);
    for (NodeId id : data.network.nodes()) {
      auto a = data.profiles.bits(id);
      auto b = back.profiles.bits(id);
      REQUIRE(std::vector<std::uint8_t>(a.begin(), a.end()) ==
              std::vector<std::uint8_t>(b.begin(), b.end()));
    }
    auto egoA = data.profiles.ego_bits();
    auto egoB = back.profiles.ego_bits();
    REQUIRE(std::vector<std::uint8_t>(egoA.begin(), egoA.end()) ==
            std::vector<std::uint8_t>(egoB.begin(), egoB.end()));
  }
}

TEST_CASE("directed loader keeps each line as one directed edge") {
  auto dir = temp_dir("directed");
  write_file(dir / "0.edges", "1 2\n2 1\n2 3\n");
  write_file(dir / "0.feat", "1 1\n2 0\n3 1\n");
  auto data = load_ego_network(dir, "0", true);
  CHECK(data.network.edge_count() == 3);
  CHECK(data.network.has_edge(1, 2));
  CHECK(data.network.has_edge(2, 1));
  CHECK(data.network.has_edge(2, 3));
  CHECK_FALSE(data.network.has_edge(3, 2));
}

TEST_CASE("single-segment feature names get synthetic categories") {
  auto dir = temp_dir("twitterish");
  write_file(dir / "0.edges", "1 2\n");
  write_file(dir / "0.feat", "1 1 0 1\n2 0 1 0\n");
  write_file(dir / "0.featnames", "0 #graphs\n1 @someone\n2 #ml\n");
  auto data = load_ego_network(dir, "0");
  CHECK(data.profiles.category_count() == 2);  // hashtags, mentions
  CHECK(data.profiles.category_of(0) == data.profiles.category_of(2));
  CHECK(data.profiles.category_of(0) != data.profiles.category_of(1));
}
