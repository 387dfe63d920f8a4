#include "neseek/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <thread>

#include "neseek/errors.hpp"

namespace neseek {

double relative_error(const Eigen::VectorXd& x, const Eigen::VectorXd& xstar) {
  if (x.size() != xstar.size()) {
    throw std::invalid_argument("relative_error: size mismatch");
  }
  const double denom = xstar.norm();
  if (denom == 0.0) {
    throw DegenerateReference("relative_error: reference has zero norm");
  }
  return (x - xstar).norm() / denom;
}

double consensus_error(const SeekerState& state) {
  return state.max_estimate_deviation();
}

namespace {

SeedRun execute_seed(const ExperimentSpec& spec, std::uint64_t seed) {
  SeedRun out;
  out.seed = seed;
  RunConfig cfg = spec.run;
  cfg.seed = seed;
  const int n = spec.game.n;
  const Eigen::VectorXd x0 =
      spec.init_x ? *spec.init_x : Eigen::VectorXd::Zero(n);
  const Eigen::MatrixXd y0 =
      spec.init_y ? *spec.init_y : Eigen::MatrixXd::Zero(n, n);
  try {
    out.record = run(spec.game, spec.weights, cfg, x0, y0);
    out.metrics.reserve(out.record.points.size());
    for (const auto& p : out.record.points) {
      MetricPoint m{p.k, p.alpha, p.mu,
                    std::numeric_limits<double>::quiet_NaN(), p.cons_err};
      if (spec.reference) m.rel_err = relative_error(p.x, *spec.reference);
      out.metrics.push_back(m);
    }
  } catch (const std::exception& e) {
    out.failed = true;
    out.error = e.what();
  }
  return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  if (spec.seeds.empty()) {
    throw std::invalid_argument("run_experiment: at least one seed required");
  }
  ExperimentResult result;
  result.runs.resize(spec.seeds.size());

  const int jobs = std::max(1, spec.jobs);
  if (jobs == 1 || spec.seeds.size() == 1) {
    for (size_t i = 0; i < spec.seeds.size(); ++i) {
      result.runs[i] = execute_seed(spec, spec.seeds[i]);
    }
  } else {
    std::atomic<size_t> next{0};
    auto worker = [&] {
      for (size_t i = next.fetch_add(1); i < spec.seeds.size();
           i = next.fetch_add(1)) {
        result.runs[i] = execute_seed(spec, spec.seeds[i]);
      }
    };
    std::vector<std::thread> pool;
    const size_t count =
        std::min<size_t>(static_cast<size_t>(jobs), spec.seeds.size());
    for (size_t t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // Aggregate across the seeds that completed; all share the recording grid.
  const SeedRun* first_ok = nullptr;
  for (const auto& r : result.runs) {
    if (!r.failed) {
      first_ok = &r;
      break;
    }
  }
  if (!first_ok) return result;
  const size_t rows = first_ok->metrics.size();
  result.summary.reserve(rows);
  for (size_t row = 0; row < rows; ++row) {
    SummaryRow s;
    s.k = first_ok->metrics[row].k;
    double rel_sum = 0, cons_sum = 0;
    double rel_min = std::numeric_limits<double>::infinity(), rel_max = 0;
    double cons_min = std::numeric_limits<double>::infinity(), cons_max = 0;
    int count = 0;
    for (const auto& r : result.runs) {
      if (r.failed) continue;
      const auto& m = r.metrics[row];
      rel_sum += m.rel_err;
      cons_sum += m.cons_err;
      rel_min = std::min(rel_min, m.rel_err);
      rel_max = std::max(rel_max, m.rel_err);
      cons_min = std::min(cons_min, m.cons_err);
      cons_max = std::max(cons_max, m.cons_err);
      ++count;
    }
    s.rel_mean = rel_sum / count;
    s.rel_min = rel_min;
    s.rel_max = rel_max;
    if (std::isnan(s.rel_mean)) {
      s.rel_min = s.rel_max = s.rel_mean;  // no reference: rel columns are NaN
    }
    s.cons_mean = cons_sum / count;
    s.cons_min = cons_min;
    s.cons_max = cons_max;
    result.summary.push_back(s);
  }
  return result;
}

namespace {

double metric_of(const SummaryRow& row, Metric metric) {
  return metric == Metric::RelErr ? row.rel_mean : row.cons_mean;
}

}  // namespace

double plateau(const ExperimentResult& result, Metric metric,
               double tail_fraction) {
  if (result.summary.empty()) {
    throw std::invalid_argument("plateau: empty result");
  }
  const long last_k = result.summary.back().k;
  const double cutoff = (1.0 - tail_fraction) * static_cast<double>(last_k);
  double sum = 0;
  int count = 0;
  for (const auto& row : result.summary) {
    if (static_cast<double>(row.k) >= cutoff && row.k > 0) {
      sum += metric_of(row, metric);
      ++count;
    }
  }
  if (count == 0) throw std::invalid_argument("plateau: no tail points");
  return sum / count;
}

std::vector<double> decade_means(const ExperimentResult& result,
                                 Metric metric) {
  std::vector<double> sums, counts;
  for (const auto& row : result.summary) {
    if (row.k < 1) continue;
    const auto d = static_cast<size_t>(std::floor(std::log10(row.k)));
    if (d >= sums.size()) {
      sums.resize(d + 1, 0.0);
      counts.resize(d + 1, 0.0);
    }
    sums[d] += metric_of(row, metric);
    counts[d] += 1.0;
  }
  std::vector<double> means;
  for (size_t d = 0; d < sums.size(); ++d) {
    if (counts[d] > 0) means.push_back(sums[d] / counts[d]);
  }
  return means;
}

std::vector<long> iterations_to_threshold(const ExperimentResult& result,
                                          double threshold) {
  std::vector<long> out;
  out.reserve(result.runs.size());
  for (const auto& r : result.runs) {
    long hit = -1;
    if (!r.failed) {
      for (const auto& m : r.metrics) {
        if (m.rel_err <= threshold) {
          hit = m.k;
          break;
        }
      }
    }
    out.push_back(hit);
  }
  return out;
}

std::string format_g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_trajectory_csv(std::ostream& out, const SeedRun& run) {
  const Eigen::Index n = run.record.points.empty()
                             ? 0
                             : run.record.points.front().x.size();
  out << "k,alpha,mu,rel_err,consensus_err";
  for (Eigen::Index i = 0; i < n; ++i) out << ",x_" << i + 1;
  out << "\n";
  for (size_t row = 0; row < run.record.points.size(); ++row) {
    const auto& p = run.record.points[row];
    const auto& m = run.metrics[row];
    out << p.k << "," << format_g17(m.alpha) << "," << format_g17(m.mu) << ","
        << format_g17(m.rel_err) << "," << format_g17(m.cons_err);
    for (Eigen::Index i = 0; i < p.x.size(); ++i) {
      out << "," << format_g17(p.x(i));
    }
    out << "\n";
  }
}

void write_summary_csv(std::ostream& out,
                       const std::vector<SummaryRow>& summary) {
  out << "k,rel_err_mean,rel_err_min,rel_err_max,cons_mean,cons_min,cons_max\n";
  for (const auto& s : summary) {
    out << s.k << "," << format_g17(s.rel_mean) << "," << format_g17(s.rel_min)
        << "," << format_g17(s.rel_max) << "," << format_g17(s.cons_mean)
        << "," << format_g17(s.cons_min) << "," << format_g17(s.cons_max)
        << "\n";
  }
}

void write_experiment_artifacts(const ExperimentResult& result,
                                const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  for (const auto& r : result.runs) {
    if (r.failed) {
      std::ofstream marker(fs::path(dir) /
                           ("failed_seed" + std::to_string(r.seed) + ".txt"));
      marker << r.error << "\n";
      continue;
    }
    std::ofstream traj(fs::path(dir) /
                       ("trajectory_seed" + std::to_string(r.seed) + ".csv"));
    write_trajectory_csv(traj, r);
  }
  std::ofstream summary(fs::path(dir) / "summary.csv");
  write_summary_csv(summary, result.summary);
}

void write_sweep_csv(std::ostream& out, const SweepResult& sweep_result) {
  out << "axis,value,seed,k,alpha,mu,rel_err,consensus_err\n";
  for (size_t v = 0; v < sweep_result.values.size(); ++v) {
    for (const auto& r : sweep_result.results[v].runs) {
      if (r.failed) continue;
      for (const auto& m : r.metrics) {
        out << sweep_result.axis << "," << sweep_result.values[v] << ","
            << r.seed << "," << m.k << "," << format_g17(m.alpha) << ","
            << format_g17(m.mu) << "," << format_g17(m.rel_err) << ","
            << format_g17(m.cons_err) << "\n";
      }
    }
  }
}

}  // namespace neseek
