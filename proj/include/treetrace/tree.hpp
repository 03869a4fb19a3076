#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

namespace treetrace {

/// Parameters of the weighted p-adic tree: branching factor p >= 2,
/// edge-length ratio ell in (0,1) and weight ratio alpha > 0.
/// Generation-n edges of the geometric tree have length ell^n and
/// integration weight alpha^n.
struct TreeParams {
  int p = 2;
  double ell = 0.5;
  double alpha = 0.5;

  /// Throws std::invalid_argument unless p >= 2, 0 < ell < 1, alpha > 0.
  void validate() const;

  /// Height L = 1/(1-ell) of the infinite tree.
  double height() const { return 1.0 / (1.0 - ell); }

  /// Trace regularity exponent sigma = log(alpha p / ell) / (2 log p).
  double sigma() const;

  /// Visibility condition ell < alpha p < 1/ell. When it fails the trace
  /// space is trivial and the harmonic basis does not exist.
  bool gate() const;
};

/// Edge e_{n,k}: generation n >= 0, branch index 0 <= k < p^n.
struct EdgeId {
  int n = 0;
  std::int64_t k = 0;

  friend bool operator==(const EdgeId& a, const EdgeId& b) {
    return a.n == b.n && a.k == b.k;
  }
  friend bool operator!=(const EdgeId& a, const EdgeId& b) { return !(a == b); }
  friend bool operator<(const EdgeId& a, const EdgeId& b) {
    return a.n != b.n ? a.n < b.n : a.k < b.k;
  }
};

/// Children of e_{n,k} are e_{n+1, pk+j}, j = 0..p-1.
std::vector<EdgeId> children(EdgeId e, int p);

/// Parent of e_{n,k} is e_{n-1, floor(k/p)}; the root edge (0,0) has none.
std::optional<EdgeId> parent(EdgeId e, int p);

/// True iff repeated parent steps from x reach ancestor (reflexively).
bool subtree_contains(EdgeId ancestor, EdgeId x, int p);

/// Branch index j such that x lies in the j-th branch subtree below
/// ancestor; empty when x is not a strict descendant of ancestor.
std::optional<int> subtree_branch(EdgeId ancestor, EdgeId x, int p);

enum class TreeKind { geometric, perturbed };

/// A point (n,k,t) with t the arclength coordinate inside the edge interval.
struct TreePoint {
  EdgeId edge;
  double t = 0.0;
};

/// The rooted p-adic metric tree truncated at a finite generation `depth`.
///
/// Geometric trees carry the self-similar lengths ell^n and weights alpha^n;
/// perturbed trees prescribe per-edge lengths/weights for finitely many edges
/// (all others default to the geometric values) and record the minimal
/// distortion c >= 1 with c^{-1} ell^n <= l_{n,k} <= c ell^n and the same
/// sandwich for weights.
///
/// Immutable after construction.
class TreeTopology {
 public:
  static TreeTopology geometric(TreeParams params, int depth);

  /// Perturbed tree; edges absent from `lengths`/`weights` keep geometric
  /// values. All prescribed values must be positive.
  static TreeTopology perturbed(TreeParams params, int depth,
                                const std::map<EdgeId, double>& lengths,
                                const std::map<EdgeId, double>& weights);

  const TreeParams& params() const { return params_; }
  int p() const { return params_.p; }
  int depth() const { return depth_; }
  TreeKind kind() const { return kind_; }

  /// Minimal distortion constant; 1 for geometric trees.
  double distortion() const { return distortion_; }

  /// Height L of the infinite tree.
  double height() const { return params_.height(); }

  /// Radial grid t_n = sum_{k<=n} ell^k; t(-1) = 0. Valid for n in
  /// [-1, depth].
  double t(int n) const;

  /// Number of edges at generation n (p^n) and in the whole truncated tree.
  std::int64_t edges_at(int n) const;
  std::int64_t edge_count() const { return edge_count_; }

  /// Linear index of an edge: generations stored contiguously, k ascending.
  std::int64_t edge_index(EdgeId e) const;
  EdgeId edge_at(std::int64_t index) const;

  double edge_length(EdgeId e) const;
  double edge_weight(EdgeId e) const;

  /// Arclength interval [L_{n,k} - l_{n,k}, L_{n,k}] occupied by the edge.
  std::pair<double, double> edge_interval(EdgeId e) const;

  /// Distance L_{n,k} from the root to the vertex X_{n,k}.
  double vertex_coordinate(EdgeId e) const;

  /// List of prescribed (non-geometric) edges, empty for geometric trees.
  const std::map<EdgeId, double>& prescribed_lengths() const { return in_lengths_; }
  const std::map<EdgeId, double>& prescribed_weights() const { return in_weights_; }

  /// Total measure of the truncated tree: sum_n (p alpha l)-type products.
  double total_measure() const;

 private:
  TreeTopology() = default;

  TreeParams params_;
  int depth_ = 0;
  TreeKind kind_ = TreeKind::geometric;
  double distortion_ = 1.0;
  std::int64_t edge_count_ = 0;
  std::vector<double> t_;          // t_[n+1] = t_n, so t_[0] = 0
  std::vector<double> pow_len_;    // ell^n
  std::vector<double> pow_w_;      // alpha^n
  std::vector<std::int64_t> gen_offset_;
  // perturbed only, indexed by edge_index
  std::vector<double> lengths_;
  std::vector<double> weights_;
  std::vector<double> cum_;        // L_{n,k}
  std::map<EdgeId, double> in_lengths_;
  std::map<EdgeId, double> in_weights_;
};

/// phi(n,k,t): affine, endpoint-preserving change of coordinates from the
/// geometric tree onto a perturbed tree with the same (p, depth).
TreePoint map_to_perturbed(const TreeTopology& perturbed, TreePoint x_geometric);

/// Inverse of map_to_perturbed.
TreePoint map_to_geometric(const TreeTopology& perturbed, TreePoint x_perturbed);

}  // namespace treetrace
