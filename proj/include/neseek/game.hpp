#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace neseek {

/// Compact interval action set Omega_i = [lo, hi].
struct ActionSet {
  double lo = 0.0;
  double hi = 0.0;
};

/// Euclidean projection onto [lo, hi], i.e. clamp.
double project(const ActionSet& s, double v);

using CostFn = std::function<double(int, const Eigen::VectorXd&)>;

/// A game seen as a black box: per-player interval action sets and a cost
/// evaluator f_i(x). Evaluators must be defined on an open neighborhood of
/// the action box because oracle probes x_i + mu*xi are not projected.
/// `grad`, when present, returns the true partial derivative df_i/dx_i and
/// exists only to drive the gradient-based baseline.
struct GameSpec {
  int n = 0;
  std::vector<ActionSet> sets;
  CostFn cost;
  CostFn grad;  // empty unless a baseline needs it

  bool has_grad() const { return static_cast<bool>(grad); }
};

double eval_cost(const GameSpec& g, int i, const Eigen::VectorXd& x);

/// Energy-consumption quadratic game:
///   f_i(x) = a_i (x_i - xr_i)^2 + (b * sum_j x_j + c) * x_i,  a_i > 0, b > 0.
struct QuadraticGame {
  Eigen::VectorXd a;
  double b = 0.0;
  double c = 0.0;
  Eigen::VectorXd xr;

  int n() const { return static_cast<int>(a.size()); }
  double cost(int i, const Eigen::VectorXd& x) const;
  // d f_i / d x_i = 2 a_i (x_i - xr_i) + b * (sum_j x_j + x_i) + c
  double partial(int i, const Eigen::VectorXd& x) const;

  GameSpec as_game_spec(std::vector<ActionSet> sets) const;
};

/// Jacobian of the stacked own-partial map: J_ii = 2 a_i + 2 b, J_ij = b.
Eigen::MatrixXd game_jacobian(const QuadraticGame& q);

/// Unique interior Nash equilibrium from the stacked first-order conditions
///   (2 a_i + 2 b) x_i + b * sum_{j != i} x_j = 2 a_i xr_i - c
/// solved as a dense linear system. Throws SingularSystem when the system is
/// degenerate and NotInterior when any coordinate lies on or outside its
/// interval (boundary-constrained equilibria are not supported here).
Eigen::VectorXd solve_quadratic_ne(const QuadraticGame& q,
                                   const std::vector<ActionSet>& sets);

/// Strong-monotonicity constant chi: the smallest eigenvalue of the
/// symmetric part of the game-mapping Jacobian. Throws NotMonotone when
/// chi <= 0.
double monotonicity_constant(const QuadraticGame& q);

struct LipschitzBounds {
  double d1 = 0.0;  // max |df_i/dx_i| over the action box, uniform over i
  double d2 = 0.0;  // max ||grad_{x_-i} f_i|| over the box
};

/// Exact bounds by corner maximization of the affine partial derivatives.
LipschitzBounds lipschitz_bounds(const QuadraticGame& q,
                                 const std::vector<ActionSet>& sets);

/// Constants feeding the constant-step admissibility diagnostic. bbound is
/// the oracle second-moment bound sqrt(1+4)*d1 for scalar actions; lhat =
/// L1 + sqrt(N-1)*L2 with L1 = d1/mu_ref and L2 = d2/mu_ref.
struct DerivedConstants {
  double d1 = 0.0;
  double d2 = 0.0;
  double bbound = 0.0;
  double chi = 0.0;
  double lhat = 0.0;
};

DerivedConstants derived_constants(const QuadraticGame& q,
                                   const std::vector<ActionSet>& sets,
                                   double mu_ref);

}  // namespace neseek
