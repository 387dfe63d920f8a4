#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>

#include "neseek/game.hpp"

namespace neseek {

enum class ScheduleKind { Constant, Diminishing };

/// Smoothing parameter sequence: constant mu0 or mu0 / (k+1)^exponent,
/// floored at kMuFloor so the oracle's division stays finite.
struct SmoothingSchedule {
  ScheduleKind kind = ScheduleKind::Diminishing;
  double mu0 = 1e-2;
  double exponent = 1.0;

  static constexpr double kMuFloor = 1e-12;

  double at(long k) const;
  bool floors_at(long k) const;
};

/// Deterministic per-player randomness: a (seed, stream) pair identifies an
/// independent substream, and the same (seed, stream, draw index) always
/// yields the same variate. Normals come from an explicit Box-Muller step so
/// sequences do not depend on the standard library's distribution internals.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed, std::uint32_t stream = 0);

  double normal();
  std::uint64_t draws() const { return draws_; }
  std::uint64_t seed() const { return seed_; }
  std::uint32_t stream() const { return stream_; }

 private:
  std::mt19937_64 gen_;
  std::uint64_t seed_ = 0;
  std::uint32_t stream_ = 0;
  std::uint64_t draws_ = 0;
};

/// Two-point randomized gradient-free oracle
///   g = [f_i(y_i + mu*xi, y_-i) - f_i(y_i, y_-i)] / mu * xi,
/// evaluated at the player's estimate vector y. Exactly two cost
/// evaluations. Throws DegenerateSmoothing when mu <= 0.
double gf_oracle(const GameSpec& g, int i, const Eigen::VectorXd& y, double mu,
                 double xi);

struct McEstimate {
  double mean = 0.0;
  double se = 0.0;  // standard error of the mean
  long samples = 0;
};

/// Monte Carlo mean of the oracle over independent xi draws; the expectation
/// is the smoothed partial derivative.
McEstimate estimate_smoothed_grad(const GameSpec& g, int i,
                                  const Eigen::VectorXd& x, double mu,
                                  long samples, RandomSource& rng);

/// Monte Carlo mean of g^2, for checking the second-moment bound (n+4)*D1^2.
McEstimate second_moment_estimate(const GameSpec& g, int i,
                                  const Eigen::VectorXd& x, double mu,
                                  long samples, RandomSource& rng);

/// Monte Carlo estimate of the Gaussian-smoothed cost
/// f_{i,mu}(x) = E[f_i(x_i + mu*xi, x_-i)].
McEstimate estimate_smoothed_value(const GameSpec& g, int i,
                                   const Eigen::VectorXd& x, double mu,
                                   long samples, RandomSource& rng);

}  // namespace neseek
