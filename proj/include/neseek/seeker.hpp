#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "neseek/game.hpp"
#include "neseek/graph.hpp"
#include "neseek/oracle.hpp"

namespace neseek {

/// Step-size sequence: constant alpha0 or alpha0 / (k+1)^exponent.
/// Exponents in (0.5, 1] give a summable-square, non-summable sequence; the
/// value 0.5 is also accepted for parity with the reference experiments.
struct StepSchedule {
  ScheduleKind kind = ScheduleKind::Diminishing;
  double alpha0 = 0.1;
  double exponent = 0.5;

  double at(long k) const;
};

enum class Mode { GradientFree, GradientBased };

struct RunConfig {
  long iters = 0;
  StepSchedule stepsize;
  SmoothingSchedule smoothing;
  Eigen::VectorXd deltas;
  std::uint64_t seed = 0;
  Mode mode = Mode::GradientFree;
  long record_stride = 1;
};

/// Joint state at round k: actions x (always inside the action box) and the
/// estimate matrix y whose row i is player i's estimate of all actions.
/// Estimates are never projected.
struct SeekerState {
  long k = 0;
  Eigen::VectorXd x;
  Eigen::MatrixXd y;

  // max_{i,l} |x_i - y(l,i)|
  double max_estimate_deviation() const;
};

SeekerState make_initial_state(const Eigen::VectorXd& x0,
                               const Eigen::MatrixXd& y0);

/// One synchronous round with the noise vector supplied explicitly: every
/// right-hand side uses time-k values.
///   x_i'   = P_{Omega_i}[x_i - alpha_k * g_i],   g_i from the oracle at row i of y
///   y_ij'  = sum_l w_il * y_lj + delta_i * w_ij * (x_j - y_ij)
/// Throws NumericOverflow (with the iteration index) if any entry goes
/// non-finite.
SeekerState step_with_noise(const SeekerState& state, const GameSpec& g,
                            const WeightMatrix& w, const RunConfig& cfg,
                            const Eigen::VectorXd& xi);

/// Draws one standard normal per player from its own stream, then advances.
SeekerState step(const SeekerState& state, const GameSpec& g,
                 const WeightMatrix& w, const RunConfig& cfg,
                 std::vector<RandomSource>& rngs);

/// Baseline round: same update laws but g_i is the true partial derivative
/// evaluated at the player's estimate row. Requires g.grad.
SeekerState gradient_step(const SeekerState& state, const GameSpec& g,
                          const WeightMatrix& w, const RunConfig& cfg);

struct TrajectoryPoint {
  long k = 0;
  double alpha = 0.0;  // step size applied at round k
  double mu = 0.0;     // smoothing value at round k
  double cons_err = 0.0;
  Eigen::VectorXd x;
};

struct RunRecord {
  std::vector<TrajectoryPoint> points;  // k strictly increasing, final always present
  SeekerState final_state;
  std::uint64_t seed = 0;
  double wall_seconds = 0.0;
  bool mu_floor_hit = false;
};

/// Runs cfg.iters rounds from the given initial values, recording the state
/// at k = 0, every record_stride rounds, and the final round. Player i's
/// noise stream is substream i of cfg.seed, so a record is a pure function
/// of (game, weights, cfg, init).
RunRecord run(const GameSpec& g, const WeightMatrix& w, const RunConfig& cfg,
              const Eigen::VectorXd& init_x, const Eigen::MatrixXd& init_y);

/// Open intervals of admissible constant step sizes.
struct AlphaWindow {
  std::vector<std::pair<double, double>> intervals;

  bool contains(double alpha) const;
  bool empty() const { return intervals.empty(); }
};

/// Solves 0 < 2*chi*alpha - q*alpha^2 < 1 for alpha > 0, where
/// q = lhat * (gamma*N*C*B/(1-gamma) + B). The analytic constant C is not
/// obtainable numerically; callers supply one (default 1), so treat the
/// result as a diagnostic rather than a guarantee. Throws InvalidCertificate
/// when cert.gamma >= 1.
AlphaWindow admissible_alpha(double chi, double lhat, double bbound,
                             const SpectralCertificate& cert, int n,
                             double c_bound = 1.0);

}  // namespace neseek
