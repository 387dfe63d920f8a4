#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "neseek/errors.hpp"
#include "neseek/seeker.hpp"
#include "support/reference.hpp"

using namespace neseek;

namespace {

GameSpec squares_game(int n, double lo = -10.0, double hi = 10.0) {
  GameSpec g;
  g.n = n;
  g.sets.assign(n, ActionSet{lo, hi});
  g.cost = [](int i, const Eigen::VectorXd& x) { return x(i) * x(i); };
  g.grad = [](int i, const Eigen::VectorXd& x) { return 2.0 * x(i); };
  return g;
}

RunConfig basic_config(int n, double alpha0, double mu0,
                       ScheduleKind step_kind = ScheduleKind::Constant) {
  RunConfig cfg;
  cfg.iters = 1;
  cfg.stepsize = {step_kind, alpha0, 0.5};
  cfg.smoothing = {ScheduleKind::Constant, mu0, 0.0};
  cfg.deltas = Eigen::VectorXd::Constant(n, 0.5);
  cfg.seed = 1;
  cfg.record_stride = 1;
  return cfg;
}

QuadraticGame hvac5() {
  QuadraticGame q;
  q.a = Eigen::VectorXd::Ones(5);
  q.b = 0.1;
  q.c = 10.0;
  q.xr.resize(5);
  q.xr << 10, 15, 20, 25, 30;
  return q;
}

// Player-by-player reference update, visiting players in the given order;
// every right-hand side reads the frozen time-k state.
SeekerState ordered_reference_step(const SeekerState& state, const GameSpec& g,
                                   const WeightMatrix& w, const RunConfig& cfg,
                                   const Eigen::VectorXd& xi,
                                   const std::vector<int>& order) {
  const int n = g.n;
  const double alpha = cfg.stepsize.at(state.k);
  const double mu = cfg.smoothing.at(state.k);
  SeekerState next;
  next.k = state.k + 1;
  next.x.resize(n);
  next.y.resize(n, n);
  for (int i : order) {
    const double gi = gf_oracle(g, i, state.y.row(i), mu, xi(i));
    next.x(i) = project(g.sets[i], state.x(i) - alpha * gi);
    for (int j = 0; j < n; ++j) {
      next.y(i, j) = w.w.row(i).dot(state.y.col(j)) +
                     cfg.deltas(i) * w.w(i, j) * (state.x(j) - state.y(i, j));
    }
  }
  return next;
}

}  // namespace

TEST_CASE("one hand-computed round on the two-player complete graph") {
  const auto g = squares_game(2);
  const auto w = balance_weights(DiGraph::complete(2));
  auto cfg = basic_config(2, 0.1, 1.0);
  SeekerState state = make_initial_state(Eigen::VectorXd::Ones(2),
                                         Eigen::MatrixXd::Ones(2, 2));
  const auto next =
      step_with_noise(state, g, w, cfg, Eigen::VectorXd::Ones(2));
  // oracle: ((1+1)^2 - 1)/1 * 1 = 3 for both players
  CHECK(next.x(0) == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(next.x(1) == doctest::Approx(0.7).epsilon(1e-15));
  // mixing of identical estimates plus zero correction leaves y alone
  CHECK((next.y - state.y).cwiseAbs().maxCoeff() == 0.0);
  CHECK(next.k == 1);
}

TEST_CASE("zero step size freezes actions while estimates mix") {
  const auto g = squares_game(3);
  const auto w = balance_weights(DiGraph::ring(3));
  auto cfg = basic_config(3, 0.0, 1.0);
  std::mt19937_64 init(3);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  Eigen::VectorXd x0(3);
  Eigen::MatrixXd y0(3, 3);
  for (int i = 0; i < 3; ++i) {
    x0(i) = unif(init);
    for (int j = 0; j < 3; ++j) y0(i, j) = unif(init);
  }
  SeekerState state = make_initial_state(x0, y0);
  std::vector<RandomSource> rngs;
  for (int i = 0; i < 3; ++i) rngs.emplace_back(9, i);
  const auto next = step(state, g, w, cfg, rngs);
  CHECK((next.x - x0).cwiseAbs().maxCoeff() == 0.0);
  CHECK((next.y - y0).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("consensus state with frozen actions is invariant") {
  const auto g = squares_game(4);
  const auto w = balance_weights(DiGraph::successor_cycle(4, 2));
  auto cfg = basic_config(4, 0.0, 1.0);
  Eigen::VectorXd x0(4);
  x0 << 1.0, -2.0, 0.5, 3.0;
  SeekerState state = make_initial_state(x0, x0.transpose().replicate(4, 1));
  std::vector<RandomSource> rngs;
  for (int i = 0; i < 4; ++i) rngs.emplace_back(4, i);
  for (int k = 0; k < 50; ++k) state = step(state, g, w, cfg, rngs);
  CHECK((state.y - x0.transpose().replicate(4, 1)).cwiseAbs().maxCoeff() <
        1e-14);
}

TEST_CASE("column sums of estimates are conserved under zero deltas") {
  const auto g = squares_game(5);
  const auto w = balance_weights(DiGraph::ring(5));
  auto cfg = basic_config(5, 0.0, 1.0);
  cfg.deltas = Eigen::VectorXd::Zero(5);
  std::mt19937_64 init(8);
  std::uniform_real_distribution<double> unif(-3.0, 3.0);
  Eigen::MatrixXd y0(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) y0(i, j) = unif(init);
  SeekerState state = make_initial_state(Eigen::VectorXd::Zero(5), y0);
  const Eigen::RowVectorXd sums0 = y0.colwise().sum();
  std::vector<RandomSource> rngs;
  for (int i = 0; i < 5; ++i) rngs.emplace_back(5, i);
  for (int k = 0; k < 100; ++k) state = step(state, g, w, cfg, rngs);
  CHECK((state.y.colwise().sum() - sums0).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("estimates contract onto frozen actions on the ring") {
  const auto g = squares_game(5);
  const auto w = balance_weights(DiGraph::ring(5));
  auto cfg = basic_config(5, 0.0, 1.0);
  Eigen::VectorXd x0(5);
  x0 << 2.0, -1.0, 4.0, 0.5, -3.0;
  std::mt19937_64 init(12);
  std::uniform_real_distribution<double> unif(-5.0, 5.0);
  Eigen::MatrixXd y0(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) y0(i, j) = unif(init);
  SeekerState state = make_initial_state(x0, y0);
  std::vector<RandomSource> rngs;
  for (int i = 0; i < 5; ++i) rngs.emplace_back(6, i);
  for (int k = 0; k < 500; ++k) state = step(state, g, w, cfg, rngs);
  CHECK(state.max_estimate_deviation() < 1e-8);
}

TEST_CASE("player update order does not matter") {
  const auto g = squares_game(6, -4.0, 4.0);
  std::mt19937_64 rng(21);
  const auto graph = testsupport::random_digraph(6, 0.3, rng);
  const auto w = balance_weights(graph);
  auto cfg = basic_config(6, 0.2, 0.5);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  Eigen::VectorXd x0(6), xi(6);
  Eigen::MatrixXd y0(6, 6);
  for (int i = 0; i < 6; ++i) {
    x0(i) = unif(rng);
    xi(i) = unif(rng);
    for (int j = 0; j < 6; ++j) y0(i, j) = unif(rng);
  }
  SeekerState state = make_initial_state(x0, y0);

  std::vector<int> forward{0, 1, 2, 3, 4, 5}, backward{5, 4, 3, 2, 1, 0};
  const auto a = ordered_reference_step(state, g, w, cfg, xi, forward);
  const auto b = ordered_reference_step(state, g, w, cfg, xi, backward);
  CHECK((a.x - b.x).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.y - b.y).cwiseAbs().maxCoeff() == 0.0);

  const auto lib = step_with_noise(state, g, w, cfg, xi);
  CHECK((lib.x - a.x).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((lib.y - a.y).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("actions stay feasible after every step") {
  const auto g = squares_game(4, -0.5, 0.5);
  const auto w = balance_weights(DiGraph::ring(4));
  auto cfg = basic_config(4, 5.0, 1.0);  // oversized steps force clamping
  cfg.iters = 200;
  const auto record = run(g, w, cfg, Eigen::VectorXd::Zero(4),
                          Eigen::MatrixXd::Zero(4, 4));
  for (const auto& p : record.points) {
    for (int i = 0; i < 4; ++i) {
      CHECK(p.x(i) >= -0.5);
      CHECK(p.x(i) <= 0.5);
    }
  }
}

TEST_CASE("gradient baseline replaces the oracle with the true partial") {
  SUBCASE("quadratic pulls toward the origin") {
    const auto g = squares_game(3);
    const auto w = balance_weights(DiGraph::ring(3));
    auto cfg = basic_config(3, 0.1, 1.0);
    SeekerState state = make_initial_state(
        Eigen::VectorXd::Ones(3), Eigen::MatrixXd::Ones(3, 3));
    const auto next = gradient_step(state, g, w, cfg);
    CHECK((next.x.array() - 0.8).abs().maxCoeff() < 1e-15);
  }
  SUBCASE("energy game at the zero state moves player 1 to 1.0") {
    const auto g =
        hvac5().as_game_spec(std::vector<ActionSet>(5, ActionSet{0, 50}));
    const auto w = balance_weights(DiGraph::ring(5));
    auto cfg = basic_config(5, 0.1, 1.0);
    SeekerState state = make_initial_state(Eigen::VectorXd::Zero(5),
                                           Eigen::MatrixXd::Zero(5, 5));
    const auto next = gradient_step(state, g, w, cfg);
    CHECK(next.x(0) == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("gradient mode requires an evaluator") {
    GameSpec g = squares_game(2);
    g.grad = nullptr;
    const auto w = balance_weights(DiGraph::complete(2));
    auto cfg = basic_config(2, 0.1, 1.0);
    SeekerState state = make_initial_state(Eigen::VectorXd::Ones(2),
                                           Eigen::MatrixXd::Ones(2, 2));
    CHECK_THROWS_AS(gradient_step(state, g, w, cfg), MissingGradient);
  }
}

TEST_CASE("runs are reproducible from the seed") {
  const auto g = squares_game(4);
  const auto w = balance_weights(DiGraph::successor_cycle(4, 2));
  auto cfg = basic_config(4, 0.1, 0.01, ScheduleKind::Diminishing);
  cfg.iters = 300;
  cfg.record_stride = 7;
  cfg.seed = 77;
  const auto r1 = run(g, w, cfg, Eigen::VectorXd::Zero(4),
                      Eigen::MatrixXd::Zero(4, 4));
  const auto r2 = run(g, w, cfg, Eigen::VectorXd::Zero(4),
                      Eigen::MatrixXd::Zero(4, 4));
  REQUIRE(r1.points.size() == r2.points.size());
  for (size_t p = 0; p < r1.points.size(); ++p) {
    CHECK(r1.points[p].k == r2.points[p].k);
    CHECK((r1.points[p].x - r2.points[p].x).cwiseAbs().maxCoeff() == 0.0);
  }
  cfg.seed = 78;
  const auto r3 = run(g, w, cfg, Eigen::VectorXd::Zero(4),
                      Eigen::MatrixXd::Zero(4, 4));
  CHECK((r1.final_state.x - r3.final_state.x).cwiseAbs().maxCoeff() > 0.0);

  // the gradient baseline ignores the noise streams entirely
  cfg.mode = Mode::GradientBased;
  cfg.seed = 77;
  const auto g1 = run(g, w, cfg, Eigen::VectorXd::Zero(4),
                      Eigen::MatrixXd::Zero(4, 4));
  cfg.seed = 78;
  const auto g2 = run(g, w, cfg, Eigen::VectorXd::Zero(4),
                      Eigen::MatrixXd::Zero(4, 4));
  CHECK((g1.final_state.x - g2.final_state.x).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("recording grid covers start, stride multiples, and the end") {
  const auto g = squares_game(2);
  const auto w = balance_weights(DiGraph::complete(2));
  auto cfg = basic_config(2, 0.1, 1.0);
  cfg.iters = 10;
  cfg.record_stride = 3;
  const auto record = run(g, w, cfg, Eigen::VectorXd::Zero(2),
                          Eigen::MatrixXd::Zero(2, 2));
  std::vector<long> ks;
  for (const auto& p : record.points) ks.push_back(p.k);
  CHECK(ks == std::vector<long>{0, 3, 6, 9, 10});

  cfg.iters = 0;
  const auto empty = run(g, w, cfg, Eigen::VectorXd::Zero(2),
                         Eigen::MatrixXd::Zero(2, 2));
  REQUIRE(empty.points.size() == 1);
  CHECK(empty.points.front().k == 0);
}

TEST_CASE("diverging state aborts with the iteration index") {
  // cosh blows past the double range once the overshooting estimates do,
  // which a quadratic cannot: its two-point difference cancels to zero in
  // floating point long before the values overflow.
  GameSpec g;
  g.n = 2;
  g.sets.assign(2, ActionSet{-1e300, 1e300});
  g.cost = [](int i, const Eigen::VectorXd& x) { return std::cosh(x(i)); };
  const auto w = balance_weights(DiGraph::complete(2));
  auto cfg = basic_config(2, 100.0, 1.0);
  cfg.iters = 1000;
  CHECK_THROWS_WITH_AS(run(g, w, cfg, Eigen::VectorXd::Ones(2),
                           Eigen::MatrixXd::Ones(2, 2)),
                       doctest::Contains("iteration"), NumericOverflow);
}

TEST_CASE("smoothing floor is reported by the run record") {
  const auto g = squares_game(2);
  const auto w = balance_weights(DiGraph::complete(2));
  auto cfg = basic_config(2, 0.01, 1.0);
  cfg.smoothing = {ScheduleKind::Diminishing, 1e-9, 4.0};
  cfg.iters = 100;
  const auto record = run(g, w, cfg, Eigen::VectorXd::Zero(2),
                          Eigen::MatrixXd::Zero(2, 2));
  CHECK(record.mu_floor_hit);
}

TEST_CASE("admissible step-size window") {
  SpectralCertificate cert{0, 0.9, 0.901, 1e-3};

  SUBCASE("vanishing quadratic coefficient reduces to (0, 1/(2 chi))") {
    const auto window = admissible_alpha(2.1, 0.0, 100.0, cert, 5);
    REQUIRE(window.intervals.size() == 1);
    CHECK(window.intervals[0].first == 0.0);
    CHECK(window.intervals[0].second ==
          doctest::Approx(1.0 / 4.2).epsilon(1e-12));
    CHECK(window.contains(0.1));
    CHECK_FALSE(window.contains(0.25));
  }

  SUBCASE("two intervals appear when the unit bound bites") {
    // q = 2, chi = 2.1: roots of q a^2 - 2 chi a + 1 at a = 0.2738.., 1.826..
    SpectralCertificate flat{0, 0.0, 0.0, 0.0};
    const auto window = admissible_alpha(2.1, 1.0, 2.0, flat, 5);
    REQUIRE(window.intervals.size() == 2);
    const double s = std::sqrt(2.1 * 2.1 - 2.0);
    CHECK(window.intervals[0].second ==
          doctest::Approx((2.1 - s) / 2.0).epsilon(1e-12));
    CHECK(window.intervals[1].first ==
          doctest::Approx((2.1 + s) / 2.0).epsilon(1e-12));
    CHECK(window.intervals[1].second == doctest::Approx(2.1).epsilon(1e-12));
    // midpoint of the excluded band violates the right-hand inequality
    const double mid = 1.0;
    CHECK(2.0 * 2.1 * mid - 2.0 * mid * mid > 1.0);
    CHECK_FALSE(window.contains(mid));
  }

  SUBCASE("window matches a dense scan of the inequality") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> uchi(0.5, 5.0), ul(0.0, 3.0),
        ub(0.0, 3.0), ug(0.0, 0.99);
    for (int trial = 0; trial < 10; ++trial) {
      const double chi = uchi(rng), lhat = ul(rng), bb = ub(rng);
      SpectralCertificate c{0, ug(rng), 0.0, 0.0};
      c.gamma = c.rho;
      const auto window = admissible_alpha(chi, lhat, bb, c, 4);
      const double q =
          lhat * (c.gamma * 4 * bb / (1.0 - c.gamma) + bb);
      const double amax = (q > 0.0 ? 2.0 * chi / q : 1.0 / (2.0 * chi)) * 1.2;
      const int grid = 10000;
      const double h = amax / grid;
      for (int t = 1; t <= grid; ++t) {
        const double a = t * h;
        const double s = 2.0 * chi * a - q * a * a;
        const bool direct = s > 0.0 && s < 1.0;
        if (direct != window.contains(a)) {
          double nearest = 1e300;
          for (auto [lo, hi] : window.intervals) {
            nearest = std::min({nearest, std::abs(a - lo), std::abs(a - hi)});
          }
          CHECK(nearest <= h);
        }
      }
    }
  }

  SUBCASE("rejects bad inputs") {
    CHECK_THROWS_AS(admissible_alpha(0.0, 1.0, 1.0, cert, 5),
                    std::invalid_argument);
    SpectralCertificate invalid{0, 0.999, 1.0, 1e-3};
    CHECK_THROWS_AS(admissible_alpha(2.1, 1.0, 1.0, invalid, 5),
                    InvalidCertificate);
  }
}
