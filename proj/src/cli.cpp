#include "neseek/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "neseek/config.hpp"
#include "neseek/errors.hpp"
#include "neseek/harness.hpp"

namespace neseek {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

RunDocument load_with_overrides(const std::string& path,
                                const std::vector<std::string>& overrides) {
  RunDocument doc = load_run_document(path);
  for (const auto& o : overrides) apply_override(doc, o);
  return doc;
}

std::string resolve_out_dir(const RunDocument& doc,
                            const std::string& out_flag) {
  if (!out_flag.empty()) return out_flag;
  const auto& exp = doc.doc["experiment"];
  if (exp.contains("out_dir")) {
    std::filesystem::path p = exp["out_dir"].get<std::string>();
    return (p.is_absolute() ? p : doc.base_dir / p).string();
  }
  throw ConfigError("no output directory: pass --out or set experiment.out_dir");
}

int print_validation(const RunDocument& doc) {
  const auto outcome = validate_document(doc);
  for (const auto& check : outcome.checks) {
    std::cout << (check.ok ? "[PASS] " : "[FAIL] ") << check.name << ": "
              << check.detail << "\n";
  }
  return outcome.ok ? kExitOk : kExitValidation;
}

void note_mu_floor(const ExperimentResult& result) {
  for (const auto& r : result.runs) {
    if (!r.failed && r.record.mu_floor_hit) {
      std::cout << "note: smoothing schedule hit its floor of 1e-12\n";
      return;
    }
  }
}

struct ModeOutcome {
  std::string name;
  ExperimentResult result;
};

void write_compare_csv(std::ostream& out, const std::vector<ModeOutcome>& modes,
                       double threshold, long iters) {
  out << "mode,seed,first_k_rel_le_threshold,final_rel_err\n";
  for (const auto& m : modes) {
    const auto firsts = iterations_to_threshold(m.result, threshold);
    for (size_t s = 0; s < m.result.runs.size(); ++s) {
      const auto& r = m.result.runs[s];
      out << m.name << "," << r.seed << ","
          << (firsts[s] >= 0 ? std::to_string(firsts[s]) : "not_reached")
          << ",";
      if (r.failed) {
        out << "failed\n";
      } else {
        out << format_g17(r.metrics.back().rel_err) << "\n";
      }
    }
  }
  (void)iters;
}

double mean_first_k(const ExperimentResult& result, double threshold,
                    long iters, int& unreached) {
  const auto firsts = iterations_to_threshold(result, threshold);
  double sum = 0;
  unreached = 0;
  for (long f : firsts) {
    if (f < 0) {
      ++unreached;
      sum += static_cast<double>(iters) + 1.0;  // cap for never-reached seeds
    } else {
      sum += static_cast<double>(f);
    }
  }
  return sum / static_cast<double>(firsts.size());
}

}  // namespace

int cmd_validate(const std::string& doc_path,
                 const std::vector<std::string>& overrides) {
  return print_validation(load_with_overrides(doc_path, overrides));
}

int cmd_solve_ne(const std::string& doc_path,
                 const std::vector<std::string>& overrides,
                 const std::string& out_dir) {
  const RunDocument doc = load_with_overrides(doc_path, overrides);
  const BuiltGame game = build_game(doc);
  const Eigen::VectorXd x = solve_quadratic_ne(game.quad, game.sets);

  std::string row;
  for (int i = 0; i < x.size(); ++i) {
    row += (i ? "," : "") + format_g17(x(i));
  }
  std::cout << row << "\n" << "sum " << format_g17(x.sum()) << "\n";

  const std::string dir = resolve_out_dir(doc, out_dir);
  std::filesystem::create_directories(dir);
  std::ofstream file(std::filesystem::path(dir) / "ne.csv");
  file << row << "\n";
  return kExitOk;
}

int cmd_run(const std::string& doc_path,
            const std::vector<std::string>& overrides,
            const std::string& out_dir, int jobs) {
  const RunDocument doc = load_with_overrides(doc_path, overrides);
  if (int rc = print_validation(doc); rc != kExitOk) return rc;

  ExperimentSpec spec = build_experiment(doc);
  spec.jobs = jobs;
  const ExperimentResult result = run_experiment(spec);
  const std::string dir = resolve_out_dir(doc, out_dir);
  write_experiment_artifacts(result, dir);
  {
    std::ofstream weights(std::filesystem::path(dir) / "weights.csv");
    write_matrix_csv(weights, spec.weights.w);
  }
  note_mu_floor(result);

  for (const auto& r : result.runs) {
    if (r.failed) {
      std::cerr << "seed " << r.seed << " failed: " << r.error << "\n";
    }
  }
  if (result.summary.empty()) return kExitRuntime;
  std::cout << "final mean relative error: "
            << format_g17(result.summary.back().rel_mean) << "\n";
  for (const auto& r : result.runs) {
    if (r.failed) return kExitRuntime;
  }
  return kExitOk;
}

int cmd_sweep(const std::string& doc_path, const std::string& axis,
              const std::vector<std::string>& values,
              const std::vector<std::string>& overrides,
              const std::string& out_dir, int jobs) {
  const RunDocument doc = load_with_overrides(doc_path, overrides);
  const SweepResult result = sweep(doc, axis, values, jobs);

  const std::string dir = resolve_out_dir(doc, out_dir);
  std::filesystem::create_directories(dir);
  std::ofstream table(std::filesystem::path(dir) / ("sweep_" + axis + ".csv"));
  write_sweep_csv(table, result);
  for (size_t v = 0; v < result.values.size(); ++v) {
    write_experiment_artifacts(
        result.results[v],
        (std::filesystem::path(dir) / (axis + "=" + result.values[v]))
            .string());
    const auto& summary = result.results[v].summary;
    std::cout << axis << "=" << result.values[v] << " final mean rel_err "
              << (summary.empty() ? "n/a" : format_g17(summary.back().rel_mean))
              << "\n";
  }
  return kExitOk;
}

int cmd_compare(const std::string& doc_path,
                const std::vector<std::string>& overrides,
                const std::string& out_dir, int jobs, double threshold) {
  const RunDocument doc = load_with_overrides(doc_path, overrides);

  std::vector<ModeOutcome> modes;
  long iters = 0;
  for (const std::string name : {"gradient-free", "gradient-based"}) {
    RunDocument mode_doc = doc;
    apply_override(mode_doc, "algo.mode=" + name);
    ExperimentSpec spec = build_experiment(mode_doc);
    spec.jobs = jobs;
    iters = spec.run.iters;
    modes.push_back({name, run_experiment(spec)});
  }

  const std::string dir = resolve_out_dir(doc, out_dir);
  std::filesystem::create_directories(dir);
  std::ofstream paired(std::filesystem::path(dir) / "compare.csv");
  write_compare_csv(paired, modes, threshold, iters);
  for (const auto& m : modes) {
    write_experiment_artifacts(m.result,
                               (std::filesystem::path(dir) / m.name).string());
  }

  std::cout << "iterations to rel_err <= " << threshold
            << " (seed-averaged, never-reached counts as iters+1):\n";
  for (const auto& m : modes) {
    int unreached = 0;
    const double mean = mean_first_k(m.result, threshold, iters, unreached);
    std::cout << "  " << m.name << ": ";
    if (unreached == static_cast<int>(m.result.runs.size())) {
      std::cout << "not reached\n";
    } else {
      std::cout << format_g17(mean);
      if (unreached > 0) std::cout << " (" << unreached << " seeds unreached)";
      std::cout << "\n";
    }
  }
  return kExitOk;
}

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"gradient-free distributed Nash equilibrium seeking simulator"};
  app.require_subcommand(1);

  std::string config, out_dir, axis;
  std::vector<std::string> overrides, values;
  int jobs = 1;
  double threshold = 0.1;

  auto add_common = [&](CLI::App* sub, bool with_out) {
    sub->add_option("--config", config, "run document (JSON)")->required();
    sub->add_option("--set", overrides,
                    "override, key.path=value (repeatable)");
    if (with_out) {
      sub->add_option("--out", out_dir, "output directory");
      sub->add_option("--jobs", jobs, "parallel seed workers");
    }
  };

  auto* validate = app.add_subcommand("validate", "run admissibility checks");
  add_common(validate, false);
  auto* solve = app.add_subcommand("solve-ne", "closed-form equilibrium");
  add_common(solve, true);
  auto* run = app.add_subcommand("run", "execute the configured experiment");
  add_common(run, true);
  auto* sweep_cmd = app.add_subcommand("sweep", "vary one parameter");
  add_common(sweep_cmd, true);
  sweep_cmd->add_option("--axis", axis, "parameter to sweep")->required();
  sweep_cmd->add_option("--values", values, "comma-separated values")
      ->required()
      ->delimiter(',');
  auto* compare =
      app.add_subcommand("compare", "gradient-free vs gradient-based");
  add_common(compare, true);
  compare->add_option("--threshold", threshold,
                      "relative-error threshold for the ordering report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (validate->parsed()) return cmd_validate(config, overrides);
    if (solve->parsed()) return cmd_solve_ne(config, overrides, out_dir);
    if (run->parsed()) return cmd_run(config, overrides, out_dir, jobs);
    if (sweep_cmd->parsed()) {
      return cmd_sweep(config, axis, values, overrides, out_dir, jobs);
    }
    return cmd_compare(config, overrides, out_dir, jobs, threshold);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace neseek
