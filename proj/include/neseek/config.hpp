#pragma once

#include <filesystem>
#include <json.hpp>
#include <string>
#include <vector>

#include "neseek/game.hpp"
#include "neseek/graph.hpp"
#include "neseek/harness.hpp"

namespace neseek {

/// A structured run document: one JSON file fully determines an experiment
/// (together with the seed list it contains). Sections: game, graph, algo,
/// experiment. Unknown keys are rejected; referenced files must exist.
struct RunDocument {
  nlohmann::json doc;
  std::filesystem::path base_dir;  // anchor for relative file references
};

RunDocument load_run_document(const std::string& path);

/// Validates structure only (keys, types, ranges, file existence). Numeric
/// admissibility (connectivity, stochasticity, deltas, monotonicity) is the
/// job of validate_document. Throws ConfigError.
void check_document_schema(const RunDocument& doc);

/// Applies a flat `key.path=value` override, e.g.
/// "algo.stepsize.alpha0=0.05". Values parse as JSON when possible and fall
/// back to strings.
void apply_override(RunDocument& doc, const std::string& assignment);

struct BuiltGame {
  QuadraticGame quad;
  std::vector<ActionSet> sets;
  GameSpec spec;
};

BuiltGame build_game(const RunDocument& doc);
DiGraph build_graph(const RunDocument& doc);
WeightMatrix build_weights(const RunDocument& doc, const DiGraph& g);
RunConfig build_run_config(const RunDocument& doc, int n);

/// Builds the full experiment: game, balanced/loaded weights, run config,
/// seeds, and the resolved equilibrium reference ("oracle" solves the
/// quadratic game; a path loads a CSV row).
ExperimentSpec build_experiment(const RunDocument& doc);

struct CheckLine {
  std::string name;
  bool ok = false;
  std::string detail;
};

struct ValidationOutcome {
  bool ok = true;
  std::vector<CheckLine> checks;
};

/// The admissibility checks behind `validate`: strong connectivity, doubly
/// stochastic weights at 1e-10, the delta condition, strong monotonicity of
/// the game mapping, and a per-player spectral certificate.
ValidationOutcome validate_document(const RunDocument& doc);

/// Rewrites the swept parameter in a copy of the document. Axes: alpha0, N,
/// topology, mode, delta, mu0. Sweeping N requires scalar `a` and the
/// slope form of `xr` so the game scales with the player count.
RunDocument apply_axis(const RunDocument& base, const std::string& axis,
                       const std::string& value);

}  // namespace neseek
