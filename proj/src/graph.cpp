#include "neseek/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <queue>
#include <random>
#include <sstream>
#include <stdexcept>

#include "neseek/errors.hpp"

namespace neseek {

DiGraph::DiGraph(int n, std::vector<std::pair<int, int>> edges) : n_(n) {
  if (n <= 0) throw std::invalid_argument("DiGraph: n must be positive");
  for (auto [from, to] : edges) {
    if (from < 0 || from >= n || to < 0 || to >= n) {
      throw std::invalid_argument("DiGraph: edge endpoint outside [0, n)");
    }
  }
  for (int i = 0; i < n; ++i) edges.emplace_back(i, i);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);
}

DiGraph DiGraph::ring(int n) { return successor_cycle(n, 1); }

DiGraph DiGraph::complete(int n) {
  std::vector<std::pair<int, int>> e;
  e.reserve(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) e.emplace_back(i, j);
  return DiGraph(n, std::move(e));
}

DiGraph DiGraph::successor_cycle(int n, int successors) {
  if (successors < 1 || successors >= n) {
    throw std::invalid_argument("successor_cycle: need 1 <= successors < n");
  }
  std::vector<std::pair<int, int>> e;
  for (int i = 0; i < n; ++i)
    for (int s = 1; s <= successors; ++s) e.emplace_back(i, (i + s) % n);
  return DiGraph(n, std::move(e));
}

bool DiGraph::has_edge(int from, int to) const {
  return std::binary_search(edges_.begin(), edges_.end(),
                            std::make_pair(from, to));
}

std::vector<std::vector<int>> DiGraph::out_adjacency() const {
  std::vector<std::vector<int>> adj(n_);
  for (auto [from, to] : edges_) adj[from].push_back(to);
  return adj;
}

std::vector<std::vector<int>> DiGraph::in_adjacency() const {
  std::vector<std::vector<int>> adj(n_);
  for (auto [from, to] : edges_) adj[to].push_back(from);
  return adj;
}

namespace {

int reachable_count(const std::vector<std::vector<int>>& adj, int start) {
  std::vector<char> seen(adj.size(), 0);
  std::queue<int> q;
  q.push(start);
  seen[start] = 1;
  int count = 1;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v : adj[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        ++count;
        q.push(v);
      }
    }
  }
  return count;
}

}  // namespace

bool is_strongly_connected(const DiGraph& g) {
  return reachable_count(g.out_adjacency(), 0) == g.n() &&
         reachable_count(g.in_adjacency(), 0) == g.n();
}

WeightMatrix balance_weights(const DiGraph& g, int max_iters, double tol) {
  if (!is_strongly_connected(g)) {
    throw std::invalid_argument("balance_weights: graph not strongly connected");
  }
  const int n = g.n();
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (auto [from, to] : g.edges()) w(to, from) = 1.0;

  for (int sweep = 0; sweep < max_iters; ++sweep) {
    for (int i = 0; i < n; ++i) w.row(i) /= w.row(i).sum();
    for (int j = 0; j < n; ++j) w.col(j) /= w.col(j).sum();
    double err = std::max((w.rowwise().sum().array() - 1.0).abs().maxCoeff(),
                          (w.colwise().sum().array() - 1.0).abs().maxCoeff());
    if (err <= tol) return WeightMatrix{g, std::move(w)};
  }
  throw NonConvergence("balance_weights: residual above tol after max_iters");
}

std::string StochasticityReport::message() const {
  if (ok) return "doubly stochastic within tolerance";
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%s %d violates (value %.6g)", kind.c_str(),
                index + 1, value);
  return buf;
}

StochasticityReport validate_doubly_stochastic(const WeightMatrix& w,
                                               double tol) {
  const int n = w.graph.n();
  if (w.w.rows() != n || w.w.cols() != n) {
    return {false, "support", -1, 0.0};
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const bool positive = w.w(i, j) > 0.0;
      if (positive != w.graph.has_edge(j, i) || w.w(i, j) < 0.0) {
        return {false, "support", i * n + j, w.w(i, j)};
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    double s = w.w.row(i).sum();
    if (std::abs(s - 1.0) > tol) return {false, "row", i, s};
  }
  for (int j = 0; j < n; ++j) {
    double s = w.w.col(j).sum();
    if (std::abs(s - 1.0) > tol) return {false, "column", j, s};
  }
  return {};
}

std::string DeltaReport::message() const {
  if (ok) return "delta condition holds";
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "delta condition fails at (l=%d, i=%d): %.6g not in [0, %.6g)",
                row + 1, col + 1, lhs, bound);
  return buf;
}

DeltaReport validate_deltas(const WeightMatrix& w,
                            const Eigen::VectorXd& deltas) {
  const int n = w.graph.n();
  if (deltas.size() != n) {
    throw std::invalid_argument("validate_deltas: deltas size mismatch");
  }
  for (int l = 0; l < n; ++l) {
    const double bound = 2.0 * w.w(l, l);
    for (int i = 0; i < n; ++i) {
      const double lhs = deltas(l) * w.w(l, i);
      if (lhs < 0.0 || lhs >= bound) return {false, l, i, lhs, bound};
    }
  }
  return {};
}

Eigen::MatrixXd tilde_matrix(const WeightMatrix& w, int i,
                             const Eigen::VectorXd& deltas) {
  const int n = w.graph.n();
  if (i < 0 || i >= n) throw std::invalid_argument("tilde_matrix: bad player");
  if (auto rep = validate_deltas(w, deltas); !rep.ok) {
    throw InvalidDelta(rep.message());
  }
  Eigen::MatrixXd m = w.w;
  for (int l = 0; l < n; ++l) {
    m(l, l) = std::abs(w.w(l, l) - deltas(l) * w.w(l, i));
  }
  return m;
}

double spectral_radius(const Eigen::MatrixXd& m, int iters, double tol) {
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("spectral_radius: matrix not square");
  }
  if ((m.array() < 0.0).any()) {
    throw std::invalid_argument("spectral_radius: matrix has negative entries");
  }
  const int n = static_cast<int>(m.rows());

  // Strictly positive start keeps the iterate inside the cone reached by the
  // Perron vector; the seed is fixed so repeated calls agree bit-for-bit.
  std::mt19937_64 gen(0x5eedULL + static_cast<unsigned>(n));
  std::uniform_real_distribution<double> unif(0.5, 1.5);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = unif(gen);
  v /= v.norm();

  double lambda_prev = -1.0;
  for (int it = 0; it < iters; ++it) {
    Eigen::VectorXd mv = m * v;
    const double lambda = mv.norm();
    if (lambda == 0.0) return 0.0;
    v = mv / lambda;
    if (std::abs(lambda - lambda_prev) <= tol * std::max(1.0, lambda)) {
      return lambda;
    }
    lambda_prev = lambda;
  }
  throw NonConvergence("spectral_radius: power iteration did not settle");
}

SpectralCertificate make_certificate(const WeightMatrix& w, int i,
                                     const Eigen::VectorXd& deltas,
                                     double margin) {
  if (margin < 0.0) throw std::invalid_argument("make_certificate: margin < 0");
  const double rho = spectral_radius(tilde_matrix(w, i, deltas));
  return {i, rho, rho + margin, margin};
}

DecayTrace infinity_norm_decay(const Eigen::MatrixXd& m, double gamma,
                               int kmax) {
  if (gamma <= 0.0) throw std::invalid_argument("infinity_norm_decay: gamma <= 0");
  DecayTrace trace;
  trace.normalized.reserve(kmax);
  // Accumulate P_k = (M / gamma)^k so ||P_k||_inf = ||M^k||_inf / gamma^k
  // without under/overflowing the raw powers.
  Eigen::MatrixXd scaled = m / gamma;
  Eigen::MatrixXd p = scaled;
  for (int k = 1; k <= kmax; ++k) {
    if (k > 1) p = p * scaled;
    const double r = p.cwiseAbs().rowwise().sum().maxCoeff();
    trace.normalized.push_back(r);
    if (r > trace.peak) {
      trace.peak = r;
      trace.peak_k = k;
    }
  }
  trace.decayed =
      trace.peak_k < kmax && trace.normalized.back() < trace.peak;
  return trace;
}

DiGraph read_graph(std::istream& in) {
  std::string line;
  int n = -1;
  std::vector<std::pair<int, int>> edges;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    if (n < 0) {
      std::string tag;
      if (!(ls >> tag >> n) || tag != "n" || n <= 0) {
        throw std::invalid_argument("graph file: expected header 'n <N>'");
      }
      continue;
    }
    int from, to;
    if (!(ls >> from)) continue;  // blank line
    if (!(ls >> to)) throw std::invalid_argument("graph file: bad edge line");
    edges.emplace_back(from - 1, to - 1);
  }
  if (n < 0) throw std::invalid_argument("graph file: missing header");
  return DiGraph(n, std::move(edges));
}

DiGraph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open graph file: " + path);
  return read_graph(in);
}

void write_graph(std::ostream& out, const DiGraph& g) {
  out << "n " << g.n() << "\n";
  for (auto [from, to] : g.edges()) {
    if (from != to) out << from + 1 << " " << to + 1 << "\n";
  }
}

Eigen::MatrixXd read_matrix_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("matrix csv: empty");
  const size_t cols = rows.front().size();
  Eigen::MatrixXd m(rows.size(), cols);
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) {
      throw std::invalid_argument("matrix csv: ragged rows");
    }
    for (size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Eigen::MatrixXd read_matrix_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open matrix csv: " + path);
  return read_matrix_csv(in);
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m) {
  char buf[32];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      out << buf << (j + 1 < m.cols() ? "," : "\n");
    }
  }
}

}  // namespace neseek
