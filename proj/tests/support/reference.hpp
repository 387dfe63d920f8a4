#pragma once

// Test-only reference implementations, kept independent of the library code
// paths they are used to check.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "neseek/game.hpp"
#include "neseek/graph.hpp"

namespace testsupport {

// Dense eigensolver oracle for spectral radii.
inline double dense_spectral_radius(const Eigen::MatrixXd& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, /*computeEigenvectors=*/false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

// Brute-force equilibrium: coordinate-wise exact quadratic minimization
// (projected Gauss-Seidel) iterated to a fixed point.
inline Eigen::VectorXd best_response_ne(
    const neseek::QuadraticGame& q, const std::vector<neseek::ActionSet>& sets,
    double tol = 1e-12, int max_sweeps = 1000000) {
  const int n = q.n();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double change = 0.0;
    for (int i = 0; i < n; ++i) {
      const double others = x.sum() - x(i);
      const double best = (2.0 * q.a(i) * q.xr(i) - q.c - q.b * others) /
                          (2.0 * q.a(i) + 2.0 * q.b);
      const double clamped = neseek::project(sets[i], best);
      change = std::max(change, std::abs(clamped - x(i)));
      x(i) = clamped;
    }
    if (change <= tol) return x;
  }
  throw std::runtime_error("best_response_ne: no fixed point");
}

// Random strongly connected digraph: a random Hamiltonian cycle plus extra
// edges with the given probability (self-loops come from the constructor).
inline neseek::DiGraph random_digraph(int n, double extra_prob,
                                      std::mt19937_64& rng) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::pair<int, int>> edges;
  for (int t = 0; t < n; ++t) {
    edges.emplace_back(perm[t], perm[(t + 1) % n]);
  }
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j && unif(rng) < extra_prob) edges.emplace_back(i, j);
    }
  }
  return neseek::DiGraph(n, std::move(edges));
}

// Deltas that satisfy the admissibility condition with every row actively
// damped: delta_l = c_l * 2 w_ll / max_i w_li with c_l in [0.25, 0.75].
inline Eigen::VectorXd random_active_deltas(const neseek::WeightMatrix& w,
                                            std::mt19937_64& rng) {
  const int n = w.graph.n();
  std::uniform_real_distribution<double> unif(0.25, 0.75);
  Eigen::VectorXd deltas(n);
  for (int l = 0; l < n; ++l) {
    deltas(l) = unif(rng) * 2.0 * w.w(l, l) / w.w.row(l).maxCoeff();
  }
  return deltas;
}

struct RandomGame {
  neseek::QuadraticGame quad;
  std::vector<neseek::ActionSet> sets;
};

// Strongly monotone quadratic game with an interior equilibrium: the box is
// placed around the unconstrained solution of the first-order system.
inline RandomGame random_quadratic_game(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ua(0.5, 3.0), ub(0.05, 0.5),
      uc(-5.0, 5.0), ur(-10.0, 10.0);
  RandomGame g;
  g.quad.a.resize(n);
  g.quad.xr.resize(n);
  for (int i = 0; i < n; ++i) {
    g.quad.a(i) = ua(rng);
    g.quad.xr(i) = ur(rng);
  }
  g.quad.b = ub(rng);
  g.quad.c = uc(rng);

  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(n, n, g.quad.b);
  Eigen::VectorXd rhs(n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = 2.0 * g.quad.a(i) + 2.0 * g.quad.b;
    rhs(i) = 2.0 * g.quad.a(i) * g.quad.xr(i) - g.quad.c;
  }
  const Eigen::VectorXd xstar = m.partialPivLu().solve(rhs);
  g.sets.assign(n, neseek::ActionSet{xstar.minCoeff() - 5.0,
                                     xstar.maxCoeff() + 5.0});
  return g;
}

}  // namespace testsupport
