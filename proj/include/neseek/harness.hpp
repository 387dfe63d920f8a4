#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "neseek/seeker.hpp"

namespace neseek {

struct RunDocument;  // config.hpp

/// ||x - xstar|| / ||xstar||. Throws DegenerateReference when xstar is zero.
double relative_error(const Eigen::VectorXd& x, const Eigen::VectorXd& xstar);

/// Maximum absolute deviation between any player's action and any player's
/// estimate of it.
double consensus_error(const SeekerState& state);

/// One experiment: a fixed problem instance executed over a list of seeds.
/// `reference` is the equilibrium used for relative errors (absent: rel_err
/// is recorded as NaN). Initial values default to all zeros.
struct ExperimentSpec {
  GameSpec game;
  WeightMatrix weights;
  RunConfig run;
  std::vector<std::uint64_t> seeds;
  std::optional<Eigen::VectorXd> reference;
  std::optional<Eigen::VectorXd> init_x;
  std::optional<Eigen::MatrixXd> init_y;
  int jobs = 1;
};

struct MetricPoint {
  long k = 0;
  double alpha = 0.0;
  double mu = 0.0;
  double rel_err = 0.0;
  double cons_err = 0.0;
};

struct SeedRun {
  std::uint64_t seed = 0;
  RunRecord record;
  std::vector<MetricPoint> metrics;
  bool failed = false;
  std::string error;
};

struct SummaryRow {
  long k = 0;
  double rel_mean = 0.0, rel_min = 0.0, rel_max = 0.0;
  double cons_mean = 0.0, cons_min = 0.0, cons_max = 0.0;
};

struct ExperimentResult {
  std::vector<SeedRun> runs;       // ordered as spec.seeds
  std::vector<SummaryRow> summary; // across-seed mean/min/max per recorded k
};

/// Executes every seed (in parallel up to spec.jobs workers), computes
/// metrics per recorded iteration, and aggregates. A seed that throws is
/// kept as a failed entry; the remaining seeds still aggregate.
ExperimentResult run_experiment(const ExperimentSpec& spec);

enum class Metric { RelErr, ConsensusErr };

/// Steady-state estimate: mean of the metric over the final `tail_fraction`
/// of recorded iterations, averaged across seeds.
double plateau(const ExperimentResult& result, Metric metric,
               double tail_fraction = 0.1);

/// Means of the seed-averaged metric over decade windows
/// [1,10), [10,100), ... computed on recorded iterations (k = 0 excluded).
std::vector<double> decade_means(const ExperimentResult& result, Metric metric);

/// Per seed, the first recorded k whose relative error is <= threshold,
/// or -1 when never reached.
std::vector<long> iterations_to_threshold(const ExperimentResult& result,
                                          double threshold);

std::string format_g17(double v);

// CSV emission. Headers are fixed:
//   trajectory: k,alpha,mu,rel_err,consensus_err,x_1,...,x_N
//   summary:    k,rel_err_mean,rel_err_min,rel_err_max,cons_mean,cons_min,cons_max
// All decimals carry 17 significant digits.
void write_trajectory_csv(std::ostream& out, const SeedRun& run);
void write_summary_csv(std::ostream& out,
                       const std::vector<SummaryRow>& summary);

/// Writes trajectory_seed<seed>.csv per completed seed, summary.csv, and a
/// failed_seed<seed>.txt marker per failed seed, into dir (created if
/// needed).
void write_experiment_artifacts(const ExperimentResult& result,
                                const std::string& dir);

struct SweepResult {
  std::string axis;
  std::vector<std::string> values;
  std::vector<ExperimentResult> results;  // aligned with values
  long iters = 0;
};

/// One run_experiment per value of the swept parameter. Supported axes:
/// alpha0, N, topology, mode, delta, mu0. Values arrive as strings and are
/// parsed per axis. Throws on an empty value list.
SweepResult sweep(const RunDocument& base, const std::string& axis,
                  const std::vector<std::string>& values, int jobs = 1);

/// Long-format table: axis,value,seed,k,alpha,mu,rel_err,consensus_err.
void write_sweep_csv(std::ostream& out, const SweepResult& sweep_result);

}  // namespace neseek
