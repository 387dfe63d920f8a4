#include "neseek/seeker.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

#include "neseek/errors.hpp"

namespace neseek {

double StepSchedule::at(long k) const {
  if (kind == ScheduleKind::Constant) return alpha0;
  return alpha0 / std::pow(static_cast<double>(k) + 1.0, exponent);
}

double SeekerState::max_estimate_deviation() const {
  const Eigen::RowVectorXd xt = x.transpose();
  return (y.rowwise() - xt).cwiseAbs().maxCoeff();
}

SeekerState make_initial_state(const Eigen::VectorXd& x0,
                               const Eigen::MatrixXd& y0) {
  if (y0.rows() != x0.size() || y0.cols() != x0.size()) {
    throw std::invalid_argument("initial estimate matrix must be n x n");
  }
  if (!x0.allFinite() || !y0.allFinite()) {
    throw std::invalid_argument("initial values must be finite");
  }
  return {0, x0, y0};
}

namespace {

void check_dimensions(const SeekerState& state, const GameSpec& g,
                      const WeightMatrix& w, const RunConfig& cfg) {
  const int n = g.n;
  if (state.x.size() != n || state.y.rows() != n || state.y.cols() != n ||
      w.w.rows() != n || cfg.deltas.size() != n) {
    throw std::invalid_argument("seeker: dimension mismatch");
  }
}

// Applies both update laws given each player's oracle output g_i.
SeekerState apply_updates(const SeekerState& state, const GameSpec& g,
                          const WeightMatrix& w, const RunConfig& cfg,
                          const Eigen::VectorXd& oracle_values) {
  const int n = g.n;
  const double alpha = cfg.stepsize.at(state.k);

  SeekerState next;
  next.k = state.k + 1;
  next.x.resize(n);
  for (int i = 0; i < n; ++i) {
    next.x(i) = project(g.sets[i], state.x(i) - alpha * oracle_values(i));
  }
  // y_ij' = sum_l w_il y_lj + delta_i w_ij (x_j - y_ij); the correction only
  // acts where player j is an in-neighbor of player i.
  next.y = w.w * state.y +
           cfg.deltas.asDiagonal() *
               w.w.cwiseProduct(state.x.transpose().replicate(n, 1) - state.y);

  if (!next.x.allFinite() || !next.y.allFinite()) {
    throw NumericOverflow("state became non-finite at iteration " +
                          std::to_string(state.k));
  }
  return next;
}

}  // namespace

SeekerState step_with_noise(const SeekerState& state, const GameSpec& g,
                            const WeightMatrix& w, const RunConfig& cfg,
                            const Eigen::VectorXd& xi) {
  check_dimensions(state, g, w, cfg);
  if (xi.size() != g.n) throw std::invalid_argument("step: xi size mismatch");
  const double mu = cfg.smoothing.at(state.k);
  Eigen::VectorXd oracle_values(g.n);
  for (int i = 0; i < g.n; ++i) {
    oracle_values(i) = gf_oracle(g, i, state.y.row(i), mu, xi(i));
  }
  return apply_updates(state, g, w, cfg, oracle_values);
}

SeekerState step(const SeekerState& state, const GameSpec& g,
                 const WeightMatrix& w, const RunConfig& cfg,
                 std::vector<RandomSource>& rngs) {
  if (static_cast<int>(rngs.size()) != g.n) {
    throw std::invalid_argument("step: one random source per player required");
  }
  Eigen::VectorXd xi(g.n);
  for (int i = 0; i < g.n; ++i) xi(i) = rngs[i].normal();
  return step_with_noise(state, g, w, cfg, xi);
}

SeekerState gradient_step(const SeekerState& state, const GameSpec& g,
                          const WeightMatrix& w, const RunConfig& cfg) {
  check_dimensions(state, g, w, cfg);
  if (!g.has_grad()) {
    throw MissingGradient("gradient_step: game has no gradient evaluator");
  }
  Eigen::VectorXd grads(g.n);
  for (int i = 0; i < g.n; ++i) grads(i) = g.grad(i, state.y.row(i));
  return apply_updates(state, g, w, cfg, grads);
}

RunRecord run(const GameSpec& g, const WeightMatrix& w, const RunConfig& cfg,
              const Eigen::VectorXd& init_x, const Eigen::MatrixXd& init_y) {
  if (cfg.iters < 0) throw std::invalid_argument("run: iters must be >= 0");
  if (cfg.record_stride < 1) {
    throw std::invalid_argument("run: record_stride must be >= 1");
  }
  if (auto rep = validate_deltas(w, cfg.deltas); !rep.ok) {
    throw InvalidDelta(rep.message());
  }
  const auto t0 = std::chrono::steady_clock::now();

  SeekerState state = make_initial_state(init_x, init_y);
  std::vector<RandomSource> rngs;
  rngs.reserve(g.n);
  for (int i = 0; i < g.n; ++i) {
    rngs.emplace_back(cfg.seed, static_cast<std::uint32_t>(i));
  }

  RunRecord record;
  record.seed = cfg.seed;
  auto snapshot = [&](const SeekerState& s) {
    record.points.push_back({s.k, cfg.stepsize.at(s.k), cfg.smoothing.at(s.k),
                             s.max_estimate_deviation(), s.x});
  };
  snapshot(state);

  for (long k = 0; k < cfg.iters; ++k) {
    if (cfg.smoothing.floors_at(k)) record.mu_floor_hit = true;
    state = cfg.mode == Mode::GradientFree
                ? step(state, g, w, cfg, rngs)
                : gradient_step(state, g, w, cfg);
    if (state.k % cfg.record_stride == 0 || state.k == cfg.iters) {
      snapshot(state);
    }
  }

  record.final_state = std::move(state);
  record.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return record;
}

bool AlphaWindow::contains(double alpha) const {
  for (auto [lo, hi] : intervals) {
    if (alpha > lo && alpha < hi) return true;
  }
  return false;
}

AlphaWindow admissible_alpha(double chi, double lhat, double bbound,
                             const SpectralCertificate& cert, int n,
                             double c_bound) {
  if (chi <= 0.0) throw std::invalid_argument("admissible_alpha: chi must be > 0");
  if (cert.gamma >= 1.0) {
    throw InvalidCertificate("admissible_alpha: certificate gamma >= 1");
  }
  if (lhat < 0.0 || bbound < 0.0 || c_bound < 0.0 || cert.gamma < 0.0) {
    throw std::invalid_argument("admissible_alpha: negative constant");
  }
  const double q =
      lhat * (cert.gamma * n * c_bound * bbound / (1.0 - cert.gamma) + bbound);

  AlphaWindow window;
  if (q == 0.0) {
    // Condition degenerates to 0 < 2*chi*alpha < 1.
    window.intervals.emplace_back(0.0, 1.0 / (2.0 * chi));
    return window;
  }
  // Left inequality: alpha < 2*chi/q. Right inequality fails exactly on the
  // closed root interval of q*alpha^2 - 2*chi*alpha + 1 <= 0, when real.
  const double upper = 2.0 * chi / q;
  const double disc = chi * chi - q;
  if (disc < 0.0) {
    window.intervals.emplace_back(0.0, upper);
    return window;
  }
  const double s = std::sqrt(disc);
  const double r_lo = (chi - s) / q;
  const double r_hi = (chi + s) / q;
  window.intervals.emplace_back(0.0, r_lo);
  if (r_hi < upper) window.intervals.emplace_back(r_hi, upper);
  return window;
}

}  // namespace neseek
