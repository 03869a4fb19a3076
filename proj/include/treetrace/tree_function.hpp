#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "treetrace/tree.hpp"

namespace treetrace {

using Complex = std::complex<double>;

/// L2/H1 norms of a TreeFunction. The truncated tail (generations beyond
/// the tree depth) counts as zero; callers are responsible for decay.
struct NormReport {
  double l2 = 0.0;
  double h1_semi = 0.0;
  double h1 = 0.0;
  /// ||f|| / ||f'|| when f(o) = 0 and f' != 0, else NaN (Poincare diagnostic).
  double poincare_ratio = 0.0;
};

/// Continuous piecewise-linear discretization of a function on a truncated
/// tree: m >= 2 samples on a uniform grid over every edge interval, linear
/// in between. Vertex continuity (last sample of an edge = first sample of
/// each child) is validated on construction; mismatches above 1e-12 are
/// rejected.
///
/// All per-edge integrals downstream are exact for this representation, so
/// norm identities hold at the discrete level and tolerances reflect the
/// generation truncation only.
class TreeFunction {
 public:
  using Tree = std::shared_ptr<const TreeTopology>;

  /// Zero function.
  TreeFunction(Tree tree, int samples_per_edge);

  /// From a full per-edge sample table, values[edge_index][i]. Validates
  /// vertex continuity.
  static TreeFunction from_samples(Tree tree, int samples_per_edge,
                                   std::vector<std::vector<Complex>> values);

  static TreeFunction constant(Tree tree, int samples_per_edge, Complex value);

  /// Radial function f(x) = F(|x|); samples F at the per-edge grids.
  static TreeFunction radial(Tree tree, int samples_per_edge,
                             const std::function<Complex(double)>& F);

  const Tree& tree() const { return tree_; }
  int samples_per_edge() const { return m_; }

  Complex sample(EdgeId e, int i) const { return values_[index(e, i)]; }
  Complex operator()(TreePoint x) const;  // piecewise-linear evaluation

  /// Value at the root o (first sample of edge (0,0)).
  Complex root_value() const { return values_[0]; }

  /// Value at the vertex X_{n,k} (last sample of that edge).
  Complex vertex_value(EdgeId e) const { return sample(e, m_ - 1); }

  TreeFunction& operator+=(const TreeFunction& other);
  TreeFunction& operator*=(Complex c);
  friend TreeFunction operator+(TreeFunction a, const TreeFunction& b) { return a += b; }
  friend TreeFunction operator*(Complex c, TreeFunction f) { return f *= c; }

  /// Raw sample storage, edge-major; used by module-internal kernels.
  const std::vector<Complex>& data() const { return values_; }
  std::vector<Complex>& mutable_data() { return values_; }

  std::size_t index(EdgeId e, int i) const {
    return std::size_t(tree_->edge_index(e)) * std::size_t(m_) + std::size_t(i);
  }

  /// Re-checks vertex continuity; throws on mismatch > 1e-12.
  void validate_continuity() const;

 private:
  Tree tree_;
  int m_ = 2;
  std::vector<Complex> values_;
};

/// Weighted L2 / H1-seminorm inner products, exact for piecewise-linear
/// samples (the per-subinterval quadrature integrates quadratics exactly).
Complex l2_inner(const TreeFunction& f, const TreeFunction& g);
Complex h1_semi_inner(const TreeFunction& f, const TreeFunction& g);

NormReport norms(const TreeFunction& f);

/// Values f(X_{N,K}) at all generation-N vertices, K ascending.
std::vector<Complex> vertex_values(const TreeFunction& f, int N);

/// f_N: equal to f on the tree truncated after generation N and constant
/// f(X_{N,K}) on every subtree below X_{N,K}.
TreeFunction extend_by_constants(const TreeFunction& f, int N);

/// f~(x) = phi(|x|) f(x) with the fixed cubic smoothstep profile phi
/// (0 on (0,1/2], 1 on [3/4,L)). Forces f~(o) = 0 and leaves f unchanged
/// outside the root edge region.
TreeFunction root_cutoff(const TreeFunction& f);

/// Value of the cutoff profile at radius t.
double cutoff_profile(double t);

/// Smallest N in [0, depth-1] such that every sample on generations > N has
/// magnitude <= tolerance; empty if none.
std::optional<int> compact_support_generation(const TreeFunction& f, double tolerance);

/// Pullback g = f o phi of a function on a perturbed tree to the geometric
/// tree with the same parameters (per-edge affine resampling; on matching
/// uniform grids this is a sample-exact copy).
TreeFunction transport_to_geometric(const TreeFunction& f_perturbed,
                                    TreeFunction::Tree geometric);

/// Inverse of transport_to_geometric.
TreeFunction transport_from_geometric(const TreeFunction& g_geometric,
                                      TreeFunction::Tree perturbed);

}  // namespace treetrace
