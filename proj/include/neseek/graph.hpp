#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace neseek {

/// Directed communication topology. Nodes are 0-indexed internally (the text
/// format is 1-indexed). An edge (from, to) means information flows from
/// `from` to `to`. Every node carries a self-loop; missing self-loops are
/// inserted on construction.
class DiGraph {
 public:
  DiGraph() : DiGraph(1, {}) {}  // trivial single-node graph
  DiGraph(int n, std::vector<std::pair<int, int>> edges);

  static DiGraph ring(int n);
  static DiGraph complete(int n);
  // Each node i links to its next `successors` nodes cyclically.
  // successor_cycle(n, 1) is the directed ring.
  static DiGraph successor_cycle(int n, int successors);

  int n() const { return n_; }
  bool has_edge(int from, int to) const;
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

  std::vector<std::vector<int>> out_adjacency() const;
  std::vector<std::vector<int>> in_adjacency() const;

 private:
  int n_ = 0;
  std::vector<std::pair<int, int>> edges_;  // sorted, unique, with self-loops
};

bool is_strongly_connected(const DiGraph& g);

/// Nonnegative mixing weights aligned to a graph: [w]_{ij} > 0 exactly when
/// the edge (j, i) exists, i.e. the receiver indexes the row.
struct WeightMatrix {
  DiGraph graph;
  Eigen::MatrixXd w;
};

/// Sinkhorn-style alternating row/column normalization restricted to the
/// graph's support. Requires strong connectivity (self-loops guarantee the
/// pattern admits a doubly-stochastic matrix). Throws NonConvergence when
/// the residual does not fall below tol within max_iters sweeps.
WeightMatrix balance_weights(const DiGraph& g, int max_iters = 100000,
                             double tol = 1e-10);

struct StochasticityReport {
  bool ok = true;
  std::string kind;  // "row" | "column" | "support"
  int index = -1;    // offending row/column (or flat support cell)
  double value = 0.0;
  std::string message() const;
};

/// Checks every row and column sum against 1 within tol and that the support
/// matches the graph exactly. Reports the first violation found.
StochasticityReport validate_doubly_stochastic(const WeightMatrix& w,
                                               double tol);

struct DeltaReport {
  bool ok = true;
  int row = -1;  // l
  int col = -1;  // i
  double lhs = 0.0;
  double bound = 0.0;
  std::string message() const;
};

/// ok iff 0 <= delta_l * [w]_{li} < 2 * [w]_{ll} for every pair (l, i).
DeltaReport validate_deltas(const WeightMatrix& w,
                            const Eigen::VectorXd& deltas);

/// Mixing matrix with the diagonal damped toward player i:
/// off-diagonal entries equal [w]_{lm}, diagonal entry l equals
/// |[w]_{ll} - delta_l * [w]_{li}|. Throws InvalidDelta when validate_deltas
/// rejects the parameters.
Eigen::MatrixXd tilde_matrix(const WeightMatrix& w, int i,
                             const Eigen::VectorXd& deltas);

/// Largest eigenvalue magnitude of a square nonnegative matrix, estimated by
/// power iteration from a strictly positive (deterministically seeded) start
/// vector with relative-change stopping.
double spectral_radius(const Eigen::MatrixXd& m, int iters = 200000,
                       double tol = 1e-13);

/// Numeric stand-in for the analytic decay constants: rho is the estimated
/// spectral radius of the damped mixing matrix for one player, gamma = rho +
/// margin is the rate handed to downstream step-size checks.
struct SpectralCertificate {
  int player = -1;
  double rho = 0.0;
  double gamma = 0.0;
  double margin = 0.0;
  bool valid() const { return gamma < 1.0; }
};

SpectralCertificate make_certificate(const WeightMatrix& w, int i,
                                     const Eigen::VectorXd& deltas,
                                     double margin = 1e-3);

/// Tracks ||M^k||_inf / gamma^k for k = 1..kmax by repeated multiplication.
/// `decayed` holds when the normalized sequence peaks strictly before kmax
/// and its final value sits strictly below the peak, i.e. the powers decay
/// at least geometrically at rate gamma inside the window.
struct DecayTrace {
  std::vector<double> normalized;
  double peak = 0.0;
  int peak_k = 0;
  bool decayed = false;
};

DecayTrace infinity_norm_decay(const Eigen::MatrixXd& m, double gamma,
                               int kmax);

// Text format: first line "n <N>", then one "<from> <to>" line per edge,
// 1-indexed; self-loops may be omitted and are restored on read.
DiGraph read_graph(std::istream& in);
DiGraph read_graph_file(const std::string& path);
void write_graph(std::ostream& out, const DiGraph& g);

// Weight matrices travel as CSV: N rows of N comma-separated decimals.
Eigen::MatrixXd read_matrix_csv(std::istream& in);
Eigen::MatrixXd read_matrix_csv_file(const std::string& path);
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m);

}  // namespace neseek
