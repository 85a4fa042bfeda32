#include "circles/owlqn.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace circles {

namespace {

double l1_term(std::span<const double> x, std::span<const double> l1) {
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += l1[i] * std::abs(x[i]);
  return sum;
}

double inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

std::vector<double> owlqn_pseudo_gradient(std::span<const double> x, std::span<const double> grad,
                                          std::span<const double> l1) {
  std::vector<double> pg(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double w = l1[i];
    if (w == 0.0) {
      pg[i] = grad[i];
    } else if (x[i] > 0.0) {
      pg[i] = grad[i] + w;
    } else if (x[i] < 0.0) {
      pg[i] = grad[i] - w;
    } else if (grad[i] + w < 0.0) {
      pg[i] = grad[i] + w;  // moving positive lowers the objective
    } else if (grad[i] - w > 0.0) {
      pg[i] = grad[i] - w;  // moving negative lowers it
    } else {
      pg[i] = 0.0;
    }
  }
  return pg;
}

OwlqnResult owlqn_minimize(std::vector<double> x0, std::span<const double> l1,
                           const SmoothEval& eval, const OwlqnOptions& options) {
  const std::size_t dim = x0.size();
  if (l1.size() != dim) throw std::runtime_error("l1 weight size mismatch");
  for (double w : l1)
    if (w < 0) throw std::runtime_error("negative l1 weight");

  if (!options.lower.empty() && options.lower.size() != dim)
    throw std::runtime_error("lower bound size mismatch");
  if (!options.upper.empty() && options.upper.size() != dim)
    throw std::runtime_error("upper bound size mismatch");
  auto boxed = [&](double v, std::size_t i) {
    if (!options.lower.empty()) v = std::max(v, options.lower[i]);
    if (!options.upper.empty()) v = std::min(v, options.upper[i]);
    return v;
  };

  // Box-pinned coordinates cannot move against their bound; drop those
  // components from the pseudo-gradient so convergence and search directions
  // see only feasible descent.
  auto project_bounds = [&](std::span<const double> xs, std::vector<double>& pg) {
    if (!options.lower.empty())
      for (std::size_t i = 0; i < dim; ++i)
        if (xs[i] <= options.lower[i] && pg[i] > 0) pg[i] = 0.0;
    if (!options.upper.empty())
      for (std::size_t i = 0; i < dim; ++i)
        if (xs[i] >= options.upper[i] && pg[i] < 0) pg[i] = 0.0;
  };

  std::vector<double> x = std::move(x0);
  for (std::size_t i = 0; i < dim; ++i) x[i] = boxed(x[i], i);
  std::vector<double> grad(dim);
  double fx = eval(x, grad);
  if (!std::isfinite(fx)) throw std::runtime_error("non-finite objective at start point");
  double obj = fx + l1_term(x, l1);

  struct Pair {
    std::vector<double> s, y;
    double rho;
  };
  std::deque<Pair> memory;

  OwlqnResult best{x, obj, 0, false};

  std::vector<double> pg = owlqn_pseudo_gradient(x, grad, l1);
  project_bounds(x, pg);
  std::vector<double> direction(dim), xNew(dim), gradNew(dim);

  for (int iter = 1; iter <= options.maxIterations; ++iter) {
    if (inf_norm(pg) <= options.tolerance) {
      best.converged = true;
      break;
    }

    // Two-loop recursion on the pseudo-gradient; curvature pairs use smooth
    // gradients only.
    for (std::size_t i = 0; i < dim; ++i) direction[i] = -pg[i];
    std::vector<double> alphas(memory.size());
    for (std::size_t m = memory.size(); m-- > 0;) {
      const auto& p = memory[m];
      double a = 0.0;
      for (std::size_t i = 0; i < dim; ++i) a += p.s[i] * direction[i];
      a *= p.rho;
      alphas[m] = a;
      for (std::size_t i = 0; i < dim; ++i) direction[i] -= a * p.y[i];
    }
    if (!memory.empty()) {
      const auto& last = memory.back();
      double yy = 0.0, sy = 0.0;
      for (std::size_t i = 0; i < dim; ++i) {
        yy += last.y[i] * last.y[i];
        sy += last.s[i] * last.y[i];
      }
      if (yy > 0) {
        double scale = sy / yy;
        for (auto& d : direction) d *= scale;
      }
    }
    for (std::size_t m = 0; m < memory.size(); ++m) {
      const auto& p = memory[m];
      double b = 0.0;
      for (std::size_t i = 0; i < dim; ++i) b += p.y[i] * direction[i];
      b *= p.rho;
      for (std::size_t i = 0; i < dim; ++i) direction[i] += (alphas[m] - b) * p.s[i];
    }

    // Keep the direction in the descent orthant of the pseudo-gradient.
    for (std::size_t i = 0; i < dim; ++i)
      if (l1[i] > 0 && direction[i] * pg[i] >= 0) direction[i] = 0.0;

    // Orthant for the projected line search.
    std::vector<double> orthant(dim);
    for (std::size_t i = 0; i < dim; ++i)
      orthant[i] = l1[i] > 0 ? (x[i] != 0.0 ? (x[i] > 0 ? 1.0 : -1.0) : (pg[i] > 0 ? -1.0 : 1.0))
                             : 0.0;

    double step = 1.0;
    bool accepted = false;
    double objNew = obj;
    for (int ls = 0; ls < options.maxLineSearch; ++ls, step *= 0.5) {
      for (std::size_t i = 0; i < dim; ++i) {
        double xi = x[i] + step * direction[i];
        if (l1[i] > 0 && xi * orthant[i] < 0) xi = 0.0;  // no crossing zero
        xNew[i] = boxed(xi, i);
      }
      double fNew = eval(xNew, gradNew);
      if (!std::isfinite(fNew)) continue;
      objNew = fNew + l1_term(xNew, l1);
      double dirDeriv = 0.0;
      for (std::size_t i = 0; i < dim; ++i) dirDeriv += pg[i] * (xNew[i] - x[i]);
      if (objNew <= obj + options.armijo * dirDeriv && objNew < obj) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;  // no improving step; keep the current (best) point

    Pair pair;
    pair.s.resize(dim);
    pair.y.resize(dim);
    double sy = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      pair.s[i] = xNew[i] - x[i];
      pair.y[i] = gradNew[i] - grad[i];
      sy += pair.s[i] * pair.y[i];
    }
    if (sy > 1e-12) {
      pair.rho = 1.0 / sy;
      memory.push_back(std::move(pair));
      if (static_cast<int>(memory.size()) > options.history) memory.pop_front();
    }

    x.swap(xNew);
    grad.swap(gradNew);
    obj = objNew;
    pg = owlqn_pseudo_gradient(x, grad, l1);
    project_bounds(x, pg);
    best.x = x;
    best.objective = obj;
    best.iterations = iter;
  }

  return best;
}

}  // namespace circles
