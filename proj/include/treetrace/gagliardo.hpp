#pragma once

#include <cstdint>

#include "treetrace/approx.hpp"

namespace treetrace {

/// Gagliardo seminorm [f]_{H^s}^2 = sum over unordered cell pairs of
/// |v_a - v_b|^2 int_A int_B |x-y|^{-(d+2s)} dx dy (each pair counted once).
///
/// d = 1: exact pairwise power-law antiderivatives, no quadrature error.
/// d = 2: stratified Monte Carlo over cell pairs with per-stratum seeded
/// streams; the radial kernel is importance-sampled so the estimator has
/// finite variance even for touching cells.
struct GagliardoResult {
  double seminorm = 0.0;    // [f]_{H^s}
  double seminorm2 = 0.0;   // [f]_{H^s}^2
  double stderr2 = 0.0;     // Monte Carlo standard error of seminorm2 (0 when exact)
  bool divergent = false;   // s >= 1/2 with discontinuous piecewise-constant data
};

/// Exact path, d = 1 only.
GagliardoResult gagliardo_seminorm(const PiecewiseConstantFn& f, double s);
GagliardoResult gagliardo_seminorm(const SampledFn& f, double s);

/// Monte Carlo path for d = 2 box decompositions. `strat_level` refines the
/// stratification (f is expanded to that generation); `samples` is the total
/// budget across strata. Deterministic for fixed seed, independent of
/// sharding.
GagliardoResult gagliardo_seminorm_mc(const PiecewiseConstantFn& f, double s,
                                      int strat_level, std::int64_t samples,
                                      std::uint64_t seed);

}  // namespace treetrace
