#include "neseek/oracle.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "neseek/errors.hpp"

namespace neseek {

double SmoothingSchedule::at(long k) const {
  if (kind == ScheduleKind::Constant) return std::max(mu0, kMuFloor);
  return std::max(mu0 / std::pow(static_cast<double>(k) + 1.0, exponent),
                  kMuFloor);
}

bool SmoothingSchedule::floors_at(long k) const {
  if (kind == ScheduleKind::Constant) return mu0 < kMuFloor;
  return mu0 / std::pow(static_cast<double>(k) + 1.0, exponent) < kMuFloor;
}

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RandomSource::RandomSource(std::uint64_t seed, std::uint32_t stream)
    : gen_(splitmix64(seed ^ splitmix64(0x517cc1b727220a95ULL + stream))),
      seed_(seed),
      stream_(stream) {}

double RandomSource::normal() {
  // One Box-Muller variate per call; no cached spare, so the draw index maps
  // to the underlying engine position reproducibly.
  constexpr double k2to53 = 9007199254740992.0;
  const double u1 = (static_cast<double>(gen_() >> 11) + 1.0) / k2to53;  // (0,1]
  const double u2 = static_cast<double>(gen_() >> 11) / k2to53;          // [0,1)
  ++draws_;
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

double gf_oracle(const GameSpec& g, int i, const Eigen::VectorXd& y, double mu,
                 double xi) {
  if (mu <= 0.0) throw DegenerateSmoothing("gf_oracle: mu must be positive");
  const double base = eval_cost(g, i, y);
  Eigen::VectorXd probe = y;
  probe(i) += mu * xi;
  const double shifted = eval_cost(g, i, probe);
  return (shifted - base) / mu * xi;
}

namespace {

template <typename Draw>
McEstimate running_moments(long samples, Draw&& draw) {
  if (samples < 2) {
    throw std::invalid_argument("monte carlo estimate needs samples >= 2");
  }
  double mean = 0.0, m2 = 0.0;
  for (long s = 0; s < samples; ++s) {
    const double v = draw();
    const double d = v - mean;
    mean += d / static_cast<double>(s + 1);
    m2 += d * (v - mean);
  }
  const double var = m2 / static_cast<double>(samples - 1);
  return {mean, std::sqrt(var / static_cast<double>(samples)), samples};
}

}  // namespace

McEstimate estimate_smoothed_grad(const GameSpec& g, int i,
                                  const Eigen::VectorXd& x, double mu,
                                  long samples, RandomSource& rng) {
  return running_moments(
      samples, [&] { return gf_oracle(g, i, x, mu, rng.normal()); });
}

McEstimate second_moment_estimate(const GameSpec& g, int i,
                                  const Eigen::VectorXd& x, double mu,
                                  long samples, RandomSource& rng) {
  return running_moments(samples, [&] {
    const double v = gf_oracle(g, i, x, mu, rng.normal());
    return v * v;
  });
}

McEstimate estimate_smoothed_value(const GameSpec& g, int i,
                                   const Eigen::VectorXd& x, double mu,
                                   long samples, RandomSource& rng) {
  Eigen::VectorXd probe = x;
  return running_moments(samples, [&] {
    probe(i) = x(i) + mu * rng.normal();
    return eval_cost(g, i, probe);
  });
}

}  // namespace neseek
