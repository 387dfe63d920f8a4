#include "neseek/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "neseek/errors.hpp"

namespace neseek {

using nlohmann::json;

namespace {

void require_keys(const json& j, const std::string& section,
                  const std::set<std::string>& required,
                  const std::set<std::string>& optional) {
  if (!j.is_object()) {
    throw ConfigError(section + ": expected an object");
  }
  for (const auto& [key, _] : j.items()) {
    if (!required.count(key) && !optional.count(key)) {
      throw ConfigError(section + ": unknown key '" + key + "'");
    }
  }
  for (const auto& key : required) {
    if (!j.contains(key)) {
      throw ConfigError(section + ": missing key '" + key + "'");
    }
  }
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path + ": expected a number");
  return j.get<double>();
}

long get_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path + ": expected an integer");
  return j.get<long>();
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path + ": expected a string");
  return j.get<std::string>();
}

Eigen::VectorXd broadcast_vector(const json& j, int n,
                                 const std::string& path) {
  Eigen::VectorXd v(n);
  if (j.is_number()) {
    v.setConstant(j.get<double>());
    return v;
  }
  if (j.is_array()) {
    if (static_cast<int>(j.size()) != n) {
      throw ConfigError(path + ": expected " + std::to_string(n) + " entries");
    }
    for (int i = 0; i < n; ++i) v(i) = get_number(j[i], path);
    return v;
  }
  throw ConfigError(path + ": expected a number or an array");
}

std::filesystem::path resolve(const RunDocument& doc, const std::string& rel) {
  std::filesystem::path p(rel);
  return p.is_absolute() ? p : doc.base_dir / p;
}

void check_file_exists(const RunDocument& doc, const std::string& rel,
                       const std::string& path) {
  if (!std::filesystem::exists(resolve(doc, rel))) {
    throw ConfigError(path + ": file not found: " + rel);
  }
}

ScheduleKind parse_kind(const std::string& s, const std::string& path) {
  if (s == "constant") return ScheduleKind::Constant;
  if (s == "diminishing") return ScheduleKind::Diminishing;
  throw ConfigError(path + ": expected 'constant' or 'diminishing'");
}

}  // namespace

RunDocument load_run_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open run document: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("run document " + path + ": " + e.what());
  }
  RunDocument doc{std::move(j),
                  std::filesystem::absolute(path).parent_path()};
  check_document_schema(doc);
  return doc;
}

void check_document_schema(const RunDocument& doc) {
  const json& j = doc.doc;
  require_keys(j, "document", {"game", "graph", "algo", "experiment"}, {});

  const json& game = j["game"];
  require_keys(game, "game", {"type", "n", "a", "b", "c", "xr", "lo", "hi"},
               {});
  if (get_string(game["type"], "game.type") != "quadratic") {
    throw ConfigError("game.type: unsupported game type '" +
                      game["type"].get<std::string>() +
                      "' (only 'quadratic' runs from a document)");
  }
  const long n = get_integer(game["n"], "game.n");
  if (n < 1) throw ConfigError("game.n: must be >= 1");
  broadcast_vector(game["a"], static_cast<int>(n), "game.a");
  get_number(game["b"], "game.b");
  get_number(game["c"], "game.c");
  if (game["xr"].is_object()) {
    require_keys(game["xr"], "game.xr", {"slope"}, {});
    get_number(game["xr"]["slope"], "game.xr.slope");
  } else {
    broadcast_vector(game["xr"], static_cast<int>(n), "game.xr");
  }
  const double lo = get_number(game["lo"], "game.lo");
  const double hi = get_number(game["hi"], "game.hi");
  if (lo > hi) throw ConfigError("game: lo must be <= hi");

  const json& graph = j["graph"];
  require_keys(graph, "graph", {"weights"}, {"builtin", "custom"});
  if (graph.contains("builtin") == graph.contains("custom")) {
    throw ConfigError("graph: exactly one of 'builtin' or 'custom' required");
  }
  if (graph.contains("builtin")) {
    const std::string b = get_string(graph["builtin"], "graph.builtin");
    if (b != "ring" && b != "complete" && b != "two-successor-cycle") {
      throw ConfigError("graph.builtin: unknown topology '" + b + "'");
    }
  } else {
    check_file_exists(doc, get_string(graph["custom"], "graph.custom"),
                      "graph.custom");
  }
  const std::string weights = get_string(graph["weights"], "graph.weights");
  if (weights != "auto") check_file_exists(doc, weights, "graph.weights");

  const json& algo = j["algo"];
  require_keys(algo, "algo", {"stepsize", "smoothing", "delta", "iters", "mode"},
               {"record_stride"});
  require_keys(algo["stepsize"], "algo.stepsize", {"kind", "alpha0"},
               {"exponent"});
  const auto step_kind =
      parse_kind(get_string(algo["stepsize"]["kind"], "algo.stepsize.kind"),
                 "algo.stepsize.kind");
  if (get_number(algo["stepsize"]["alpha0"], "algo.stepsize.alpha0") <= 0.0) {
    throw ConfigError("algo.stepsize.alpha0: must be positive");
  }
  if (step_kind == ScheduleKind::Diminishing) {
    if (!algo["stepsize"].contains("exponent") ||
        get_number(algo["stepsize"]["exponent"],
                   "algo.stepsize.exponent") <= 0.0) {
      throw ConfigError("algo.stepsize.exponent: positive value required");
    }
  }
  require_keys(algo["smoothing"], "algo.smoothing", {"kind", "mu0"},
               {"exponent"});
  const auto mu_kind =
      parse_kind(get_string(algo["smoothing"]["kind"], "algo.smoothing.kind"),
                 "algo.smoothing.kind");
  if (get_number(algo["smoothing"]["mu0"], "algo.smoothing.mu0") <= 0.0) {
    throw ConfigError("algo.smoothing.mu0: must be positive");
  }
  if (mu_kind == ScheduleKind::Diminishing) {
    if (!algo["smoothing"].contains("exponent") ||
        get_number(algo["smoothing"]["exponent"],
                   "algo.smoothing.exponent") <= 0.0) {
      throw ConfigError("algo.smoothing.exponent: positive value required");
    }
  }
  broadcast_vector(algo["delta"], static_cast<int>(n), "algo.delta");
  if (get_integer(algo["iters"], "algo.iters") < 0) {
    throw ConfigError("algo.iters: must be >= 0");
  }
  const std::string mode = get_string(algo["mode"], "algo.mode");
  if (mode != "gradient-free" && mode != "gradient-based") {
    throw ConfigError("algo.mode: expected 'gradient-free' or 'gradient-based'");
  }
  if (algo.contains("record_stride") &&
      get_integer(algo["record_stride"], "algo.record_stride") < 1) {
    throw ConfigError("algo.record_stride: must be >= 1");
  }

  const json& exp = j["experiment"];
  require_keys(exp, "experiment", {"seeds"}, {"out_dir", "reference"});
  if (!exp["seeds"].is_array() || exp["seeds"].empty()) {
    throw ConfigError("experiment.seeds: non-empty array required");
  }
  for (const auto& s : exp["seeds"]) {
    if (!s.is_number_integer() || s.get<long long>() < 0) {
      throw ConfigError("experiment.seeds: entries must be non-negative integers");
    }
  }
  if (exp.contains("reference")) {
    const std::string ref = get_string(exp["reference"], "experiment.reference");
    if (ref != "oracle") check_file_exists(doc, ref, "experiment.reference");
  }
  if (exp.contains("out_dir")) {
    get_string(exp["out_dir"], "experiment.out_dir");
  }
}

void apply_override(RunDocument& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override must look like key.path=value: " + assignment);
  }
  const std::string path = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);

  json parsed;
  try {
    parsed = json::parse(value);
  } catch (const json::parse_error&) {
    parsed = value;  // bare strings like `ring` or `constant`
  }

  json* node = &doc.doc;
  std::istringstream keys(path);
  std::string key;
  std::vector<std::string> parts;
  while (std::getline(keys, key, '.')) parts.push_back(key);
  for (size_t i = 0; i + 1 < parts.size(); ++i) {
    node = &(*node)[parts[i]];
  }
  (*node)[parts.back()] = parsed;
  check_document_schema(doc);
}

BuiltGame build_game(const RunDocument& doc) {
  const json& game = doc.doc["game"];
  const int n = static_cast<int>(game["n"].get<long>());
  BuiltGame out;
  out.quad.a = broadcast_vector(game["a"], n, "game.a");
  out.quad.b = game["b"].get<double>();
  out.quad.c = game["c"].get<double>();
  if (game["xr"].is_object()) {
    const double slope = game["xr"]["slope"].get<double>();
    out.quad.xr.resize(n);
    for (int i = 0; i < n; ++i) out.quad.xr(i) = slope * (i + 1);
  } else {
    out.quad.xr = broadcast_vector(game["xr"], n, "game.xr");
  }
  if ((out.quad.a.array() <= 0.0).any() || out.quad.b <= 0.0) {
    throw ConfigError("game: requires a_i > 0 and b > 0");
  }
  out.sets.assign(n, ActionSet{game["lo"].get<double>(),
                               game["hi"].get<double>()});
  out.spec = out.quad.as_game_spec(out.sets);
  return out;
}

DiGraph build_graph(const RunDocument& doc) {
  const json& graph = doc.doc["graph"];
  const int n = static_cast<int>(doc.doc["game"]["n"].get<long>());
  try {
    if (graph.contains("custom")) {
      DiGraph g = read_graph_file(
          resolve(doc, graph["custom"].get<std::string>()).string());
      if (g.n() != n) {
        throw ConfigError("graph.custom: node count differs from game.n");
      }
      return g;
    }
    const std::string b = graph["builtin"].get<std::string>();
    if (b == "ring") return DiGraph::ring(n);
    if (b == "complete") return DiGraph::complete(n);
    return DiGraph::successor_cycle(n, 2);  // two-successor-cycle
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("graph: ") + e.what());
  }
}

WeightMatrix build_weights(const RunDocument& doc, const DiGraph& g) {
  const std::string w = doc.doc["graph"]["weights"].get<std::string>();
  if (w == "auto") return balance_weights(g);
  Eigen::MatrixXd m = read_matrix_csv_file(resolve(doc, w).string());
  if (m.rows() != g.n() || m.cols() != g.n()) {
    throw ConfigError("graph.weights: matrix shape differs from game.n");
  }
  return WeightMatrix{g, std::move(m)};
}

RunConfig build_run_config(const RunDocument& doc, int n) {
  const json& algo = doc.doc["algo"];
  RunConfig cfg;
  cfg.iters = algo["iters"].get<long>();
  cfg.stepsize.kind = parse_kind(algo["stepsize"]["kind"].get<std::string>(),
                                 "algo.stepsize.kind");
  cfg.stepsize.alpha0 = algo["stepsize"]["alpha0"].get<double>();
  cfg.stepsize.exponent = algo["stepsize"].contains("exponent")
                              ? algo["stepsize"]["exponent"].get<double>()
                              : 0.0;
  cfg.smoothing.kind = parse_kind(algo["smoothing"]["kind"].get<std::string>(),
                                  "algo.smoothing.kind");
  cfg.smoothing.mu0 = algo["smoothing"]["mu0"].get<double>();
  cfg.smoothing.exponent = algo["smoothing"].contains("exponent")
                               ? algo["smoothing"]["exponent"].get<double>()
                               : 0.0;
  cfg.deltas = broadcast_vector(algo["delta"], n, "algo.delta");
  cfg.mode = algo["mode"].get<std::string>() == "gradient-free"
                 ? Mode::GradientFree
                 : Mode::GradientBased;
  cfg.record_stride = algo.contains("record_stride")
                          ? algo["record_stride"].get<long>()
                          : 1;
  return cfg;
}

ExperimentSpec build_experiment(const RunDocument& doc) {
  BuiltGame game = build_game(doc);
  const DiGraph g = build_graph(doc);

  ExperimentSpec spec;
  spec.weights = build_weights(doc, g);
  spec.run = build_run_config(doc, game.spec.n);

  const json& exp = doc.doc["experiment"];
  for (const auto& s : exp["seeds"]) {
    spec.seeds.push_back(s.get<std::uint64_t>());
  }
  const std::string ref =
      exp.contains("reference") ? exp["reference"].get<std::string>() : "oracle";
  if (ref == "oracle") {
    spec.reference = solve_quadratic_ne(game.quad, game.sets);
  } else {
    Eigen::MatrixXd m = read_matrix_csv_file(resolve(doc, ref).string());
    if (m.size() != game.spec.n) {
      throw ConfigError("experiment.reference: expected " +
                        std::to_string(game.spec.n) + " values");
    }
    spec.reference = Eigen::VectorXd(
        Eigen::Map<Eigen::VectorXd>(m.data(), m.size()));
  }
  spec.game = std::move(game.spec);
  return spec;
}

ValidationOutcome validate_document(const RunDocument& doc) {
  ValidationOutcome out;
  auto add = [&](const std::string& name, bool ok, const std::string& detail) {
    out.checks.push_back({name, ok, detail});
    out.ok = out.ok && ok;
  };

  const DiGraph g = build_graph(doc);
  const bool connected = is_strongly_connected(g);
  add("strong-connectivity", connected,
      std::to_string(g.n()) + " nodes, " + std::to_string(g.edges().size()) +
          " edges");
  if (!connected) return out;

  WeightMatrix w = build_weights(doc, g);
  const auto ds = validate_doubly_stochastic(w, 1e-10);
  add("doubly-stochastic", ds.ok, ds.message());

  const int n = g.n();
  RunConfig cfg = build_run_config(doc, n);
  const auto dr = validate_deltas(w, cfg.deltas);
  add("delta-condition", dr.ok, dr.message());

  BuiltGame game = build_game(doc);
  try {
    const double chi = monotonicity_constant(game.quad);
    add("monotonicity", true, "chi = " + format_g17(chi));
  } catch (const NotMonotone& e) {
    add("monotonicity", false, e.what());
  }

  if (dr.ok) {
    double worst = 0.0;
    bool all_valid = true;
    for (int i = 0; i < n; ++i) {
      const auto cert = make_certificate(w, i, cfg.deltas);
      worst = std::max(worst, cert.gamma);
      all_valid = all_valid && cert.valid();
    }
    add("spectral-certificates", all_valid,
        "max gamma = " + format_g17(worst));
  } else {
    add("spectral-certificates", false, "skipped: delta condition failed");
  }
  return out;
}

RunDocument apply_axis(const RunDocument& base, const std::string& axis,
                       const std::string& value) {
  RunDocument doc = base;
  auto numeric = [&](const char* path) {
    apply_override(doc, std::string(path) + "=" + value);
  };
  if (axis == "alpha0") {
    numeric("algo.stepsize.alpha0");
  } else if (axis == "mu0") {
    numeric("algo.smoothing.mu0");
  } else if (axis == "delta") {
    numeric("algo.delta");
  } else if (axis == "mode") {
    apply_override(doc, "algo.mode=" + value);
  } else if (axis == "topology") {
    apply_override(doc, "graph.builtin=" + value);
  } else if (axis == "N") {
    if (!base.doc["game"]["xr"].is_object() ||
        !base.doc["game"]["a"].is_number()) {
      throw ConfigError(
          "sweep over N requires scalar game.a and the slope form of game.xr");
    }
    numeric("game.n");
  } else {
    throw ConfigError("unknown sweep axis '" + axis + "'");
  }
  return doc;
}

}  // namespace neseek
