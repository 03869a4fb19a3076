#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "treetrace/decomposition.hpp"

namespace treetrace {

using Complex = std::complex<double>;

/// Element of V_N: constant on every generation-N cell of a decomposition,
/// values indexed by k. With (A4*), ||f||^2 = |Omega| p^-N sum |v_k|^2.
struct PiecewiseConstantFn {
  std::shared_ptr<const Decomposition> dec;
  int level = 0;
  std::vector<Complex> values;

  static PiecewiseConstantFn zero(std::shared_ptr<const Decomposition> dec, int level);

  double l2_norm() const;
  /// Same function represented at a finer level (values copied down).
  PiecewiseConstantFn at_level(int finer) const;
};

Complex pcf_inner(const PiecewiseConstantFn& f, const PiecewiseConstantFn& g);
double pcf_distance(const PiecewiseConstantFn& f, const PiecewiseConstantFn& g);

/// Function sampled at the centers of a uniform grid (R cells per axis,
/// d = 1 or 2), treated as piecewise constant on the grid cells. The grid
/// must align with the decomposition cells so that projections are exact:
/// R a multiple of p^(per-axis split count at the decomposition depth).
struct SampledFn {
  std::shared_ptr<const Decomposition> dec;
  int resolution = 0;                 // cells per axis
  std::vector<Complex> values;        // row-major for d = 2

  static SampledFn from_function(std::shared_ptr<const Decomposition> dec, int resolution,
                                 const std::function<Complex(const std::vector<double>&)>& f);

  double l2_norm() const;
  double cell_width() const { return 1.0 / double(resolution); }
};

/// Cell averages at generation n: exact for both carriers.
PiecewiseConstantFn project_Pn(const PiecewiseConstantFn& f, int n);
PiecewiseConstantFn project_Pn(const SampledFn& f, int n);

/// Q_0 = P_0, Q_n = P_n - P_{n-1}; returned at level n.
PiecewiseConstantFn detail_Qn(const PiecewiseConstantFn& f, int n);
PiecewiseConstantFn detail_Qn(const SampledFn& f, int n);

/// Both forms of the approximation norm A^r: the xi-form
/// (||P_0 f||^2 + sum_n p^{2nr/d} ||f - P_n f||^2)^(1/2) and the zeta-form
/// (sum_n p^{2nr/d} ||Q_n f||^2)^(1/2). Series truncate at the decomposition
/// depth; the last term of each is reported as a tail proxy and the norm is
/// flagged unresolved when it exceeds 1% of the accumulated value.
struct ApproxNorm {
  double a_r = 0.0;
  double a_r_viaQ = 0.0;
  double tail_xi = 0.0;
  double tail_zeta = 0.0;
  bool resolved = true;
};

ApproxNorm approx_norm(const PiecewiseConstantFn& f, double r);
ApproxNorm approx_norm(const SampledFn& f, double r);

/// Modulus of smoothness w(f,t): sup over the fixed direction set (axes and,
/// for d = 2, normalized diagonals) and radii {t, t/2, t/4} of
/// ||f(.+h) - f||_{L2(Omega cap (Omega-h))}. Exact overlap integrals for
/// d = 1; for d = 2 shifts are snapped to the sampling grid. The search-set
/// supremum underestimates the true sup monotonically.
double modulus_of_smoothness(const PiecewiseConstantFn& f, double t);
double modulus_of_smoothness(const SampledFn& f, double t);

/// Besov-form norm ||f||_{L2} + || p^{sj/d} w(f, p^{-j/d}) ||_{l2, j<=J}
/// with J set by the decomposition depth.
struct BesovNorm {
  double value = 0.0;
  double tail = 0.0;       // last computed term W_J
  bool resolved = true;    // tail <= 1% of the accumulated l2 part
  bool diverging = false;  // terms W_j fail to decay (s too large)
};

BesovNorm besov_norm(const PiecewiseConstantFn& f, double s);
BesovNorm besov_norm(const SampledFn& f, double s);

/// One row of an equivalence report: the three norms at the same order and
/// their pairwise ratios.
struct EquivalenceRow {
  std::string id;
  double a_r = 0.0;
  double besov = 0.0;
  double gagliardo = 0.0;  // ||f||_{L2} + [f]_{H^s}
  double ratio_a_besov = 0.0;
  double ratio_a_gagliardo = 0.0;
  double ratio_besov_gagliardo = 0.0;
};

struct EquivalenceReport {
  std::vector<EquivalenceRow> rows;
  double bracket_a_besov = 0.0;  // max/min ratio over the family
  double bracket_a_gagliardo = 0.0;
  double bracket_besov_gagliardo = 0.0;
};

EquivalenceReport equivalence_report(const std::vector<PiecewiseConstantFn>& family,
                                     const std::vector<std::string>& ids, double r,
                                     std::uint64_t seed = 1);

}  // namespace treetrace
