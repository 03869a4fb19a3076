#include "treetrace/gagliardo.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "treetrace/rng.hpp"

namespace treetrace {

namespace {

bool effectively_constant(const std::vector<Complex>& v) {
  for (const auto& x : v)
    if (std::abs(x - v.front()) > 1e-14) return false;
  return true;
}

// [f]^2 for f piecewise constant on R uniform cells of width w. The pair
// kernel J(m) = int_A int_B |x-y|^{-(1+2s)} depends only on the index
// distance m = b - a:
//   J(m) = (2 H(m w) - H((m-1) w) - H((m+1) w)) / (2s (1-2s)),  H(u) = u^{1-2s},
// positive by concavity of H. Pairs are counted once.
double exact_1d(const std::vector<Complex>& v, double w, double s) {
  const int R = int(v.size());
  const double gamma = 1.0 - 2.0 * s;
  const double denom = 2.0 * s * gamma;
  auto H = [&](double u) { return std::pow(u, gamma); };
  std::vector<double> J(static_cast<std::size_t>(R));
  for (int m = 1; m < R; ++m)
    J[std::size_t(m)] = (2.0 * H(m * w) - H((m - 1) * w) - H((m + 1) * w)) / denom;
  double total = 0.0;
  for (int m = 1; m < R; ++m) {
    double diff2 = 0.0;
    for (int a = 0; a + m < R; ++a) diff2 += std::norm(v[std::size_t(a + m)] - v[std::size_t(a)]);
    total += diff2 * J[std::size_t(m)];
  }
  return total;
}

GagliardoResult pack(double seminorm2, double stderr2) {
  GagliardoResult r;
  r.seminorm2 = seminorm2;
  r.seminorm = std::sqrt(seminorm2);
  r.stderr2 = stderr2;
  return r;
}

GagliardoResult divergent_result() {
  GagliardoResult r;
  r.divergent = true;
  r.seminorm = std::numeric_limits<double>::infinity();
  r.seminorm2 = std::numeric_limits<double>::infinity();
  return r;
}

void check_order(double s) {
  if (!(s > 0.0 && s < 1.0))
    throw std::invalid_argument("gagliardo_seminorm: s must lie in (0,1)");
}

}  // namespace

GagliardoResult gagliardo_seminorm(const PiecewiseConstantFn& f, double s) {
  check_order(s);
  if (f.dec->dim() != 1)
    throw std::invalid_argument("gagliardo_seminorm: exact path is d = 1 only");
  if (s >= 0.5) {
    if (effectively_constant(f.values)) return pack(0.0, 0.0);
    return divergent_result();
  }
  return pack(exact_1d(f.values, f.dec->cell_volume(f.level), s), 0.0);
}

GagliardoResult gagliardo_seminorm(const SampledFn& f, double s) {
  check_order(s);
  if (f.dec->dim() != 1)
    throw std::invalid_argument("gagliardo_seminorm: exact path is d = 1 only");
  if (s >= 0.5) {
    if (effectively_constant(f.values)) return pack(0.0, 0.0);
    return divergent_result();
  }
  return pack(exact_1d(f.values, f.cell_width(), s), 0.0);
}

GagliardoResult gagliardo_seminorm_mc(const PiecewiseConstantFn& f, double s,
                                      int strat_level, std::int64_t samples,
                                      std::uint64_t seed) {
  check_order(s);
  const auto& dec = *f.dec;
  if (dec.dim() != 2)
    throw std::invalid_argument("gagliardo_seminorm_mc: Monte Carlo path is d = 2 only");
  if (strat_level < f.level)
    throw std::invalid_argument("gagliardo_seminorm_mc: stratification coarser than f");
  if (s >= 0.5) {
    if (effectively_constant(f.values)) return pack(0.0, 0.0);
    return divergent_result();
  }

  const PiecewiseConstantFn fine = f.at_level(strat_level);
  const std::int64_t count = dec.cells_at(strat_level);
  std::vector<Cell> cells(static_cast<std::size_t>(count));
  for (std::int64_t k = 0; k < count; ++k) cells[std::size_t(k)] = dec.cell(strat_level, k);

  // active strata: unordered cell pairs with differing values
  std::vector<std::pair<std::int64_t, std::int64_t>> pairs;
  for (std::int64_t a = 0; a < count; ++a)
    for (std::int64_t b = a + 1; b < count; ++b)
      if (std::norm(fine.values[std::size_t(a)] - fine.values[std::size_t(b)]) > 0.0)
        pairs.emplace_back(a, b);
  if (pairs.empty()) return pack(0.0, 0.0);

  const std::int64_t per =
      std::max<std::int64_t>(4, samples / std::int64_t(pairs.size()));
  const double kernel_pow = 1.0 + 2.0 * s;  // after the polar substitution
  const double beta = 0.5 + s;              // importance density r^-beta, normalizable

  double total = 0.0, var_total = 0.0;
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t pi_ = 0; pi_ < pairs.size(); ++pi_) {
    const auto [a, b] = pairs[pi_];
    const Cell& A = cells[std::size_t(a)];
    const Cell& B = cells[std::size_t(b)];
    // largest |u| with A and B - u overlapping
    double rmax2 = 0.0;
    for (std::size_t i = 0; i < 2; ++i) {
      const double m = std::max(std::abs(B.hi[i] - A.lo[i]), std::abs(B.lo[i] - A.hi[i]));
      rmax2 += m * m;
    }
    const double R = std::sqrt(rmax2);
    const double norm_c = std::pow(R, 1.0 - beta) / (1.0 - beta);  // int_0^R r^-beta dr

    SplitMix64 rng = substream(seed, std::uint64_t(pi_));
    double mean = 0.0, m2 = 0.0;
    for (std::int64_t n = 0; n < per; ++n) {
      const double theta = two_pi * rng.uniform();
      const double r = R * std::pow(rng.uniform(), 1.0 / (1.0 - beta));
      Cell shifted = B;
      const double ux = r * std::cos(theta), uy = r * std::sin(theta);
      shifted.lo[0] -= ux;
      shifted.hi[0] -= ux;
      shifted.lo[1] -= uy;
      shifted.hi[1] -= uy;
      const double ov = box_overlap(A, shifted);
      // W = int int r^{-(1+2s)} ov dr dtheta; importance weight is bounded
      // because ov <= C r for touching cells
      const double h = ov <= 0.0 ? 0.0
                                 : two_pi * norm_c * std::pow(r, beta - kernel_pow) * ov;
      const double delta = h - mean;
      mean += delta / double(n + 1);
      m2 += delta * (h - mean);
    }
    const double w2 = std::norm(fine.values[std::size_t(a)] - fine.values[std::size_t(b)]);
    total += w2 * mean;
    var_total += w2 * w2 * (m2 / double(per)) / double(per);
  }
  return pack(total, std::sqrt(var_total));
}

}  // namespace treetrace
