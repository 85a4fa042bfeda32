#pragma once

#include <vector>

namespace circles {

// Exact s-t max flow on real-valued capacities (Dinic). After solve(), the
// source side of a minimum cut is the residual-reachable set.
class MaxFlow {
 public:
  explicit MaxFlow(int nodes);

  // Directed arc u -> v; parallel arcs accumulate independently.
  void add_edge(int u, int v, double capacity);

  double solve(int source, int sink);

  // Valid after solve(): true for nodes on the source side of the min cut.
  std::vector<char> source_side() const;

  int node_count() const { return static_cast<int>(head_.size()); }

 private:
  struct Arc {
    int to;
    int rev;
    double cap;
  };
  bool bfs(int s, int t);
  double dfs(int v, int t, double limit);

  std::vector<std::vector<Arc>> head_;
  std::vector<int> level_;
  std::vector<std::size_t> iter_;
};

}  // namespace circles
