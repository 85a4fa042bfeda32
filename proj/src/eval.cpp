#include "circles/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

namespace circles {

namespace {

std::size_t intersection_size(const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
  std::set<NodeId> sa(a.begin(), a.end());
  std::size_t hits = 0;
  std::set<NodeId> seen;
  for (NodeId id : b)
    if (sa.count(id) && seen.insert(id).second) ++hits;
  return hits;
}

std::size_t distinct_size(const std::vector<NodeId>& v) {
  return std::set<NodeId>(v.begin(), v.end()).size();
}

}  // namespace

double ber(const std::vector<NodeId>& predicted, const std::vector<NodeId>& truth) {
  const auto np = distinct_size(predicted);
  const auto nt = distinct_size(truth);
  if (np == 0 || nt == 0) return 0.5;
  const auto common = intersection_size(predicted, truth);
  const double falsePos = double(np - common) / double(np);
  const double falseNeg = double(nt - common) / double(nt);
  return 0.5 * (falsePos + falseNeg);
}

double f1(const std::vector<NodeId>& predicted, const std::vector<NodeId>& truth) {
  const auto np = distinct_size(predicted);
  const auto nt = distinct_size(truth);
  if (np == 0 || nt == 0) return 0.0;
  const auto common = intersection_size(predicted, truth);
  if (common == 0) return 0.0;
  const double precision = double(common) / double(np);
  const double recall = double(common) / double(nt);
  return 2.0 * precision * recall / (precision + recall);
}

std::vector<int> solve_assignment(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  for (const auto& row : cost)
    if (static_cast<int>(row.size()) != n) throw std::runtime_error("cost matrix must be square");
  if (n == 0) return {};

  // Hungarian algorithm with potentials, O(n^3). 1-based internal arrays.
  const double INF = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0), v(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<int> p(static_cast<std::size_t>(n) + 1, 0), way(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n) + 1, INF);
    std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      int i0 = p[static_cast<std::size_t>(j0)], j1 = 0;
      double delta = INF;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        double cur = cost[static_cast<std::size_t>(i0 - 1)][static_cast<std::size_t>(j - 1)] -
                     u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> rowToCol(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= n; ++j)
    if (p[static_cast<std::size_t>(j)] > 0) rowToCol[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1)] = j - 1;
  return rowToCol;
}

MatchResult match_circles(const CircleAssignment& predicted, const CircleAssignment& truth,
                          MatchMetric metric, bool strict) {
  const int kp = predicted.circle_count();
  const int kt = truth.circle_count();
  MatchResult result;
  if (kp == 0 || kt == 0) {
    result.score = strict && (kp > 0 || kt > 0) ? 0.5 : 0.0;
    return result;
  }

  auto pairScore = [&](int i, int j) {
    const auto& c = predicted.circles[static_cast<std::size_t>(i)];
    const auto& t = truth.circles[static_cast<std::size_t>(j)];
    return metric == MatchMetric::oneMinusBer ? 1.0 - ber(c, t) : f1(c, t);
  };

  const int n = std::max(kp, kt);
  std::vector<std::vector<double>> cost(static_cast<std::size_t>(n),
                                        std::vector<double>(static_cast<std::size_t>(n), 0.0));
  for (int i = 0; i < kp; ++i)
    for (int j = 0; j < kt; ++j) cost[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = -pairScore(i, j);

  auto rowToCol = solve_assignment(cost);
  for (int i = 0; i < kp; ++i) {
    int j = rowToCol[static_cast<std::size_t>(i)];
    if (j < kt) result.mapping.emplace_back(i, j);
  }
  std::sort(result.mapping.begin(), result.mapping.end());

  double total = 0.0;
  for (auto [i, j] : result.mapping) {
    double s = pairScore(i, j);
    result.perPairScores.push_back(s);
    total += s;
  }
  const int matched = static_cast<int>(result.mapping.size());
  if (strict) {
    // Unmatched slots count as random predictions.
    result.score = (total + 0.5 * (n - matched)) / double(n);
  } else {
    result.score = matched > 0 ? total / double(matched) : 0.0;
  }
  return result;
}

double modularity(const EgoNetwork& net, const CircleAssignment& partition) {
  partition.validate_against(net);
  const int K = partition.circle_count();
  std::vector<int> clusterOf(static_cast<std::size_t>(net.node_count()), -1);
  for (int k = 0; k < K; ++k)
    for (NodeId id : partition.circles[static_cast<std::size_t>(k)]) {
      int idx = net.index_of(id);
      if (clusterOf[static_cast<std::size_t>(idx)] != -1)
        throw std::runtime_error("modularity needs a disjoint partition");
      clusterOf[static_cast<std::size_t>(idx)] = k;
    }
  for (int i = 0; i < net.node_count(); ++i)
    if (clusterOf[static_cast<std::size_t>(i)] == -1)
      throw std::runtime_error("partition must cover every node");

  const double m = static_cast<double>(net.edge_count());
  if (m == 0) return 0.0;
  std::vector<std::vector<double>> e(static_cast<std::size_t>(K), std::vector<double>(static_cast<std::size_t>(K), 0.0));
  for (const auto& [x, y] : net.edges()) {
    int cx = clusterOf[static_cast<std::size_t>(x)];
    int cy = clusterOf[static_cast<std::size_t>(y)];
    if (cx == cy) {
      e[static_cast<std::size_t>(cx)][static_cast<std::size_t>(cx)] += 1.0 / m;
    } else {
      e[static_cast<std::size_t>(cx)][static_cast<std::size_t>(cy)] += 0.5 / m;
      e[static_cast<std::size_t>(cy)][static_cast<std::size_t>(cx)] += 0.5 / m;
    }
  }
  double q = 0.0;
  for (int i = 0; i < K; ++i) {
    double a = 0.0;
    for (int j = 0; j < K; ++j) a += e[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    q += e[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] - a * a;
  }
  return q;
}

int choose_k_modularity(const EgoNetwork& net, const std::function<CircleAssignment(int)>& clusterFn,
                        int kMax) {
  int bestK = 1;
  double bestQ = -std::numeric_limits<double>::infinity();
  for (int k = 1; k <= kMax; ++k) {
    double q = modularity(net, clusterFn(k));
    if (q > bestQ) {
      bestQ = q;
      bestK = k;
    }
  }
  return bestK;
}

}  // namespace circles
