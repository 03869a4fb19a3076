#pragma once

#include <map>

#include "treetrace/approx.hpp"
#include "treetrace/harmonic.hpp"

namespace treetrace {

/// Finitely supported Z-indexed coefficient family with the weighted
/// sequence norms ||a||_{l2_r} = (sum p^{2 r nu(z)} |a_z|^2)^{1/2}.
struct TraceCoefficients {
  TreeParams params;
  std::map<SymmetryIndex, Complex> entries;

  Complex at(const SymmetryIndex& z) const {
    const auto it = entries.find(z);
    return it == entries.end() ? Complex(0.0, 0.0) : it->second;
  }
  double l2r_norm(double r) const;
  int max_nu() const;

  TraceCoefficients& operator+=(const TraceCoefficients& other);
  TraceCoefficients& operator*=(Complex c);
};

/// Multiplier of the diagonal map M: m_rad = F_rad^infty (no p factor, the
/// rad entry of the trace is the plain limit value) and
/// m_{(n,k,s)} = p^{-n/2} F_n^infty.
double trace_multiplier(const TreeParams& params, const SymmetryIndex& z);

/// Depth-truncated multiplier p^{-max(nu,0)/2} F_{nu}(t_depth): the value tau
/// assigns to the z-entry of the truncated basis function phi_z, converging
/// to trace_multiplier at the geometric rate (ell/(alpha p))^depth.
double trace_multiplier_truncated(const TreeParams& params, const SymmetryIndex& z,
                                  int depth);

/// Abstract trace tau f = M Theta^{-1} P~_Delta (root cutoff applied first).
///
/// The expansion coefficients a_z = <f~', phi_z'> reduce to per-edge
/// endpoint differences (phi_z' is constant/q on every edge), which telescope
/// across interior vertices; tau evaluates the telescoped form, a character
/// transform of the generation-depth vertex values. Compactly supported data
/// therefore produce exact zeros. The tail beyond the truncation is treated
/// by constant extension (tau f = tau f_depth, the Lemma-style limit form).
/// Requires the gate and a geometric tree.
TraceCoefficients tau(const TreeFunction& f);

/// tau applied to extend_by_constants(f, N); converges to tau(f) as N grows
/// and equals it for N = depth.
TraceCoefficients tau_vertex(const TreeFunction& f, int N);

/// tau of a function on a perturbed tree: pullback through the coordinate
/// change, then the geometric trace.
TraceCoefficients tau_perturbed(const TreeFunction& f);

/// Identification I_Omega: e_rad -> 1_Omega and
/// e_{(n,k,s)} -> p^{n/2} sum_j theta_s^j 1_{Omega_{n+1,pk+j}}, evaluated as
/// the level-`level` piecewise constant (level >= max nu + 1 over the
/// support; pass -1 for the minimal level). Requires a strongly balanced
/// decomposition with matching p.
PiecewiseConstantFn identify(const TraceCoefficients& coeffs,
                             std::shared_ptr<const Decomposition> dec, int level = -1);

/// Inverse of identify on level-N data: the hierarchical character analysis
/// of g in the image basis {I_Omega e_z : nu(z) <= N-1}.
TraceCoefficients identify_inverse(const PiecewiseConstantFn& g, const TreeParams& params);

/// Both computable forms of the embedded trace gamma_Omega f = I_Omega tau f.
struct EmbeddedTrace {
  PiecewiseConstantFn method_a;  // identify(tau(f)), the basis route
  PiecewiseConstantFn method_b;  // vertex values f(X_{N,K}) on level-N cells
  double discrepancy_l2 = 0.0;   // ||A - B||_{L2(Omega)}
};

EmbeddedTrace gamma(const TreeFunction& f, std::shared_ptr<const Decomposition> dec, int N);

/// Right inverse of the embedded trace: expands g in the image basis and
/// lifts through the harmonic basis, normalized with the depth-truncated
/// multipliers so that gamma(lift(g)) = g exactly at level N on the
/// truncated tree.
TreeFunction lift(const PiecewiseConstantFn& g, TreeFunction::Tree tree,
                  int samples_per_edge);

}  // namespace treetrace
