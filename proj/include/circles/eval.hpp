#pragma once

#include <functional>
#include <vector>

#include "circles/types.hpp"

namespace circles {

// Balanced error rate between a predicted and a ground-truth member set;
// 0 is perfect, random predictions land at 0.5. An empty side scores the
// random-equivalent 0.5.
double ber(const std::vector<NodeId>& predicted, const std::vector<NodeId>& truth);

// Harmonic precision/recall mean; 0 when the sets do not intersect.
double f1(const std::vector<NodeId>& predicted, const std::vector<NodeId>& truth);

enum class MatchMetric { oneMinusBer, f1 };

struct MatchResult {
  // predicted index -> truth index, |mapping| = min(K_pred, K_truth)
  std::vector<std::pair<int, int>> mapping;
  std::vector<double> perPairScores;
  double score = 0.0;
};

// Optimal circle alignment via exact linear assignment on the pairwise score
// matrix. Extra predictions are unmatched and unpenalized; `strict` instead
// averages over max(K_pred, K_truth) charging unmatched slots a 0.5 score.
MatchResult match_circles(const CircleAssignment& predicted, const CircleAssignment& truth,
                          MatchMetric metric = MatchMetric::oneMinusBer, bool strict = false);

// Newman modularity Q = sum_i (e_ii - a_i^2) of a disjoint partition covering
// every node.
double modularity(const EgoNetwork& net, const CircleAssignment& partition);

// argmax_K modularity(clusterFn(K)) over 1..kMax; ties toward smaller K.
int choose_k_modularity(const EgoNetwork& net, const std::function<CircleAssignment(int)>& clusterFn,
                        int kMax);

// Exact min-cost assignment (rows to columns, square matrix); returns the
// column picked for each row.
std::vector<int> solve_assignment(const std::vector<std::vector<double>>& cost);

}  // namespace circles
