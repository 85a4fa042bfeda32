#pragma once

#include <functional>
#include <span>
#include <vector>

namespace circles {

// Smooth part of the objective: returns f(x) and fills grad. The optimizer
// minimizes f(x) + sum_i l1[i] * |x[i]|.
using SmoothEval = std::function<double(std::span<const double> x, std::span<double> grad)>;

struct OwlqnOptions {
  int maxIterations = 100;
  int history = 10;
  double tolerance = 1e-7;       // on the pseudo-gradient infinity norm
  double armijo = 1e-4;
  int maxLineSearch = 50;
  // Optional per-coordinate box; empty vectors mean unbounded. Iterates are
  // projected onto the box after the orthant projection.
  std::vector<double> lower;
  std::vector<double> upper;
};

struct OwlqnResult {
  std::vector<double> x;
  double objective;      // f + L1 penalty at x
  int iterations = 0;
  bool converged = false;
};

// Orthant-wise limited-memory quasi-Newton descent. Coordinates under an L1
// penalty never cross zero within a step, and coordinates at zero only move
// when the pseudo-gradient pushes them off it. Monotone: every accepted step
// lowers the objective, and the start point is returned when no step does.
OwlqnResult owlqn_minimize(std::vector<double> x0, std::span<const double> l1,
                           const SmoothEval& eval, const OwlqnOptions& options = {});

// Pseudo-gradient of f + l1*|x| at x (given the smooth gradient); zero entries
// indicate stationarity in the corresponding coordinate.
std::vector<double> owlqn_pseudo_gradient(std::span<const double> x, std::span<const double> grad,
                                          std::span<const double> l1);

}  // namespace circles
