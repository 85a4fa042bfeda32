#include "circles/maxflow.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>

namespace circles {

namespace {
constexpr double kEps = 1e-12;
}

MaxFlow::MaxFlow(int nodes) : head_(static_cast<std::size_t>(nodes)) {}

void MaxFlow::add_edge(int u, int v, double capacity) {
  if (capacity < 0) throw std::runtime_error("negative capacity");
  if (capacity <= 0) return;
  auto& hu = head_[static_cast<std::size_t>(u)];
  auto& hv = head_[static_cast<std::size_t>(v)];
  hu.push_back({v, static_cast<int>(hv.size()), capacity});
  hv.push_back({u, static_cast<int>(hu.size()) - 1, 0.0});
}

bool MaxFlow::bfs(int s, int t) {
  level_.assign(head_.size(), -1);
  std::deque<int> queue{s};
  level_[static_cast<std::size_t>(s)] = 0;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (const Arc& arc : head_[static_cast<std::size_t>(v)]) {
      if (arc.cap > kEps && level_[static_cast<std::size_t>(arc.to)] < 0) {
        level_[static_cast<std::size_t>(arc.to)] = level_[static_cast<std::size_t>(v)] + 1;
        queue.push_back(arc.to);
      }
    }
  }
  return level_[static_cast<std::size_t>(t)] >= 0;
}

double MaxFlow::dfs(int v, int t, double limit) {
  if (v == t) return limit;
  for (auto& i = iter_[static_cast<std::size_t>(v)]; i < head_[static_cast<std::size_t>(v)].size(); ++i) {
    Arc& arc = head_[static_cast<std::size_t>(v)][i];
    if (arc.cap <= kEps || level_[static_cast<std::size_t>(arc.to)] != level_[static_cast<std::size_t>(v)] + 1)
      continue;
    double pushed = dfs(arc.to, t, std::min(limit, arc.cap));
    if (pushed > 0) {
      arc.cap -= pushed;
      head_[static_cast<std::size_t>(arc.to)][static_cast<std::size_t>(arc.rev)].cap += pushed;
      return pushed;
    }
  }
  return 0.0;
}

double MaxFlow::solve(int source, int sink) {
  double flow = 0.0;
  while (bfs(source, sink)) {
    iter_.assign(head_.size(), 0);
    while (double pushed = dfs(source, sink, std::numeric_limits<double>::infinity()))
      flow += pushed;
  }
  return flow;
}

std::vector<char> MaxFlow::source_side() const {
  // level_ holds the last (failed) BFS labeling: exactly the residual-reachable set.
  std::vector<char> side(head_.size(), 0);
  for (std::size_t v = 0; v < head_.size(); ++v) side[v] = level_[v] >= 0 ? 1 : 0;
  return side;
}

}  // namespace circles
