#include "neseek/game.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "neseek/errors.hpp"

namespace neseek {

double project(const ActionSet& s, double v) {
  return std::clamp(v, s.lo, s.hi);
}

double eval_cost(const GameSpec& g, int i, const Eigen::VectorXd& x) {
  if (i < 0 || i >= g.n) throw std::invalid_argument("eval_cost: bad player");
  if (x.size() != g.n) throw std::invalid_argument("eval_cost: x size mismatch");
  return g.cost(i, x);
}

double QuadraticGame::cost(int i, const Eigen::VectorXd& x) const {
  const double d = x(i) - xr(i);
  return a(i) * d * d + (b * x.sum() + c) * x(i);
}

double QuadraticGame::partial(int i, const Eigen::VectorXd& x) const {
  return 2.0 * a(i) * (x(i) - xr(i)) + b * (x.sum() + x(i)) + c;
}

GameSpec QuadraticGame::as_game_spec(std::vector<ActionSet> sets) const {
  GameSpec g;
  g.n = n();
  g.sets = std::move(sets);
  QuadraticGame q = *this;
  g.cost = [q](int i, const Eigen::VectorXd& x) { return q.cost(i, x); };
  g.grad = [q](int i, const Eigen::VectorXd& x) { return q.partial(i, x); };
  return g;
}

Eigen::MatrixXd game_jacobian(const QuadraticGame& q) {
  const int n = q.n();
  Eigen::MatrixXd j = Eigen::MatrixXd::Constant(n, n, q.b);
  for (int i = 0; i < n; ++i) j(i, i) = 2.0 * q.a(i) + 2.0 * q.b;
  return j;
}

Eigen::VectorXd solve_quadratic_ne(const QuadraticGame& q,
                                   const std::vector<ActionSet>& sets) {
  const int n = q.n();
  if (static_cast<int>(sets.size()) != n || q.xr.size() != n) {
    throw std::invalid_argument("solve_quadratic_ne: size mismatch");
  }
  Eigen::VectorXd rhs(n);
  for (int i = 0; i < n; ++i) rhs(i) = 2.0 * q.a(i) * q.xr(i) - q.c;

  Eigen::FullPivLU<Eigen::MatrixXd> lu(game_jacobian(q));
  if (!lu.isInvertible()) {
    throw SingularSystem("solve_quadratic_ne: first-order system is singular");
  }
  Eigen::VectorXd x = lu.solve(rhs);
  for (int i = 0; i < n; ++i) {
    if (!(x(i) > sets[i].lo && x(i) < sets[i].hi)) {
      throw NotInterior("solve_quadratic_ne: equilibrium coordinate " +
                        std::to_string(i + 1) + " not strictly inside [" +
                        std::to_string(sets[i].lo) + ", " +
                        std::to_string(sets[i].hi) + "]");
    }
  }
  return x;
}

double monotonicity_constant(const QuadraticGame& q) {
  const Eigen::MatrixXd j = game_jacobian(q);
  const Eigen::MatrixXd sym = 0.5 * (j + j.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  const double chi = es.eigenvalues().minCoeff();
  if (chi <= 0.0) {
    throw NotMonotone("game mapping is not strongly monotone (chi = " +
                      std::to_string(chi) + ")");
  }
  return chi;
}

namespace {

// Extremes of an affine function over the action box, chosen coordinate-wise
// (equivalent to enumerating corners since the function is affine).
std::pair<double, double> affine_range(const Eigen::VectorXd& coef,
                                       double constant,
                                       const std::vector<ActionSet>& sets) {
  double lo = constant, hi = constant;
  for (int j = 0; j < coef.size(); ++j) {
    const double at_lo = coef(j) * sets[j].lo;
    const double at_hi = coef(j) * sets[j].hi;
    lo += std::min(at_lo, at_hi);
    hi += std::max(at_lo, at_hi);
  }
  return {lo, hi};
}

}  // namespace

LipschitzBounds lipschitz_bounds(const QuadraticGame& q,
                                 const std::vector<ActionSet>& sets) {
  const int n = q.n();
  if (static_cast<int>(sets.size()) != n) {
    throw std::invalid_argument("lipschitz_bounds: size mismatch");
  }
  LipschitzBounds out;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd coef = Eigen::VectorXd::Constant(n, q.b);
    coef(i) = 2.0 * q.a(i) + 2.0 * q.b;
    auto [lo, hi] = affine_range(coef, q.c - 2.0 * q.a(i) * q.xr(i), sets);
    out.d1 = std::max(out.d1, std::max(std::abs(lo), std::abs(hi)));
    // d f_i / d x_j = b * x_i for j != i, so the cross-gradient norm is
    // |b x_i| * sqrt(n - 1), maximized at the widest |x_i|.
    const double xmax = std::max(std::abs(sets[i].lo), std::abs(sets[i].hi));
    out.d2 = std::max(out.d2, std::abs(q.b) * xmax * std::sqrt(n - 1.0));
  }
  return out;
}

DerivedConstants derived_constants(const QuadraticGame& q,
                                   const std::vector<ActionSet>& sets,
                                   double mu_ref) {
  if (mu_ref <= 0.0) {
    throw std::invalid_argument("derived_constants: mu_ref must be positive");
  }
  const auto lb = lipschitz_bounds(q, sets);
  DerivedConstants dc;
  dc.d1 = lb.d1;
  dc.d2 = lb.d2;
  dc.bbound = std::sqrt(5.0) * lb.d1;
  dc.chi = monotonicity_constant(q);
  const double l1 = lb.d1 / mu_ref;
  const double l2 = lb.d2 / mu_ref;
  dc.lhat = l1 + std::sqrt(q.n() - 1.0) * l2;
  return dc;
}

}  // namespace neseek
