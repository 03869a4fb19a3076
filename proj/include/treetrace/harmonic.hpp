#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "treetrace/tree_function.hpp"

namespace treetrace {

/// Index of the symmetry decomposition: the radial sector or a character
/// triple (n,k,s) attached to the subtree below X_{n,k}, 1 <= s <= p-1.
/// The numeric level is nu(rad) = -1 and nu(n,k,s) = n.
struct SymmetryIndex {
  int nu = -1;            // -1 encodes rad
  std::int64_t k = 0;     // unused for rad
  int s = 0;              // unused for rad

  static SymmetryIndex rad() { return {}; }
  static SymmetryIndex triple(int n, std::int64_t k, int s) { return {n, k, s}; }

  bool is_rad() const { return nu < 0; }
  EdgeId edge() const { return {nu, k}; }

  friend bool operator==(const SymmetryIndex& a, const SymmetryIndex& b) {
    return a.nu == b.nu && (a.is_rad() || (a.k == b.k && a.s == b.s));
  }
  friend bool operator<(const SymmetryIndex& a, const SymmetryIndex& b) {
    if (a.nu != b.nu) return a.nu < b.nu;
    if (a.is_rad()) return false;
    if (a.k != b.k) return a.k < b.k;
    return a.s < b.s;
  }
};

/// p-th root of unity theta_s^j; exact +-1 for p = 2.
Complex theta_power(int p, int s, long long j);

/// All indices z with nu(z) <= max_nu (rad first, then triples by (n,k,s)).
std::vector<SymmetryIndex> symmetry_indices(int p, int max_nu);

/// Radial weight q(t) = (alpha p)^n for t in (t_{n-1}, t_n]. Requires
/// 0 < t < L.
double weight_q(const TreeParams& params, double t);

/// One-dimensional profile F on (t_start, L) sampled on the same per-edge
/// grids as TreeFunction, for generations start+1 .. depth; start = -1 for
/// radial profiles with support (0, L). When the profile continues
/// analytically beyond the truncation with (qF')' = 0, tail_derivative
/// holds the constant c with F' = c/q on (t_depth, L).
struct RadialProfile {
  int start = -1;
  int depth = 0;
  int m = 2;
  std::vector<std::vector<Complex>> values;  // [g - start - 1][i]
  std::optional<double> tail_derivative;

  int generations() const { return depth - start; }
  Complex sample(int generation, int i) const {
    return values[std::size_t(generation - start - 1)][std::size_t(i)];
  }
  Complex left_value() const { return values.front().front(); }
  Complex limit_value() const { return values.back().back(); }
};

/// Weighted L2 norm^2 and H1 seminorm^2 of the profile in its natural space
/// L2((t_start, L), p^{-max(start,0)} q(t) dt); exact for the piecewise
/// linear data, with the closed-form geometric tail added when present.
double profile_l2_norm2(const RadialProfile& F, const TreeParams& params);
double profile_h1_semi_norm2(const RadialProfile& F, const TreeParams& params);

/// Closed-form normalized harmonic profiles (unit H1 seminorm in their
/// weighted spaces). Require the gate ell < alpha p < 1/ell.
double profile_F_rad(const TreeParams& params, double t);
double profile_F_n(const TreeParams& params, int n, double t);

/// Derivative scale: F' = c/q with c_rad = sqrt(1 - ell/(alpha p)) and
/// c_n = p^n (alpha/ell)^{n/2} sqrt((alpha p - ell)/ell).
double profile_derivative_scale(const TreeParams& params, const SymmetryIndex& z);

/// Boundary limits F^infty = lim_{t->L} F(t) in closed form.
double F_infty(const TreeParams& params, const SymmetryIndex& z);

/// Harmonic profile of index z sampled on a depth/m grid, with its
/// analytic tail attached.
RadialProfile harmonic_profile(const TreeParams& params, const SymmetryIndex& z,
                               int depth, int samples_per_edge);

/// U_rad F or U_{n,k,s} F as a TreeFunction: radial lift, or the character
/// lift supported on the subtree below X_{n,k} with branch j twisted by
/// theta_s^j. Geometric trees only.
TreeFunction synth(const SymmetryIndex& z, const RadialProfile& F,
                   TreeFunction::Tree tree);

/// phi_z = U_z F_{nu(z)} on the given tree (exact: the harmonic profiles are
/// linear on every edge).
TreeFunction harmonic_basis_function(const SymmetryIndex& z, TreeFunction::Tree tree,
                                     int samples_per_edge);

/// Adjoint of synth: branch-character averages of f. synth(z, analyze(f,z))
/// is the orthogonal projection of f onto the z-sector.
RadialProfile analyze(const TreeFunction& f, const SymmetryIndex& z);

/// Orthogonal projection of f onto the z-sector.
TreeFunction project_sector(const TreeFunction& f, const SymmetryIndex& z);

/// Gram matrix of {phi_z} in the H1~ inner product <f', g'>_{L2(T)},
/// evaluated by the analytic one-dimensional reduction with closed-form
/// geometric tails; no truncation error. Requires the gate and
/// nu(z) < depth for every entry.
Eigen::MatrixXcd basis_gram(const TreeParams& params,
                            const std::vector<SymmetryIndex>& zs, int depth);

}  // namespace treetrace
