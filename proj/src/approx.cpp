#include "treetrace/approx.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "treetrace/gagliardo.hpp"

namespace treetrace {

namespace {

std::int64_t ipow(std::int64_t base, int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

PiecewiseConstantFn PiecewiseConstantFn::zero(std::shared_ptr<const Decomposition> dec,
                                              int level) {
  if (!dec) throw std::invalid_argument("PiecewiseConstantFn: null decomposition");
  if (level < 0 || level > dec->depth())
    throw std::invalid_argument("PiecewiseConstantFn: level outside the decomposition");
  PiecewiseConstantFn f;
  f.level = level;
  f.values.assign(std::size_t(dec->cells_at(level)), Complex(0.0, 0.0));
  f.dec = std::move(dec);
  return f;
}

double PiecewiseConstantFn::l2_norm() const {
  double s = 0.0;
  for (const auto& v : values) s += std::norm(v);
  return std::sqrt(s * dec->cell_volume(level));
}

PiecewiseConstantFn PiecewiseConstantFn::at_level(int finer) const {
  if (finer < level) throw std::invalid_argument("PiecewiseConstantFn::at_level: coarser level");
  PiecewiseConstantFn out = zero(dec, finer);
  const std::int64_t span = ipow(dec->p(), finer - level);
  for (std::int64_t k = 0; k < std::int64_t(values.size()); ++k)
    for (std::int64_t j = 0; j < span; ++j)
      out.values[std::size_t(k * span + j)] = values[std::size_t(k)];
  return out;
}

Complex pcf_inner(const PiecewiseConstantFn& f, const PiecewiseConstantFn& g) {
  if (f.dec != g.dec) throw std::invalid_argument("pcf_inner: different decompositions");
  const int level = std::max(f.level, g.level);
  const PiecewiseConstantFn a = f.at_level(level), b = g.at_level(level);
  Complex s(0.0, 0.0);
  for (std::size_t i = 0; i < a.values.size(); ++i) s += a.values[i] * std::conj(b.values[i]);
  return s * f.dec->cell_volume(level);
}

double pcf_distance(const PiecewiseConstantFn& f, const PiecewiseConstantFn& g) {
  const int level = std::max(f.level, g.level);
  const PiecewiseConstantFn a = f.at_level(level), b = g.at_level(level);
  double s = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) s += std::norm(a.values[i] - b.values[i]);
  return std::sqrt(s * f.dec->cell_volume(level));
}

SampledFn SampledFn::from_function(
    std::shared_ptr<const Decomposition> dec, int resolution,
    const std::function<Complex(const std::vector<double>&)>& f) {
  if (!dec) throw std::invalid_argument("SampledFn: null decomposition");
  if (dec->dim() > 2) throw std::invalid_argument("SampledFn: only d = 1, 2 supported");
  if (resolution < 1) throw std::invalid_argument("SampledFn: resolution must be positive");
  // alignment with the decomposition cells: every cell must be a union of
  // grid cells, i.e. resolution divisible by p^(splits per axis at depth)
  const int splits = (dec->depth() + dec->dim() - 1) / dec->dim();
  const std::int64_t req = ipow(dec->p(), splits);
  if (resolution % req != 0)
    throw std::invalid_argument("SampledFn: resolution must be a multiple of p^" +
                                std::to_string(splits));
  SampledFn out;
  out.dec = std::move(dec);
  out.resolution = resolution;
  const int d = out.dec->dim();
  const double w = 1.0 / double(resolution);
  if (d == 1) {
    out.values.resize(std::size_t(resolution));
    for (int i = 0; i < resolution; ++i) out.values[std::size_t(i)] = f({(i + 0.5) * w});
  } else {
    out.values.resize(std::size_t(resolution) * std::size_t(resolution));
    for (int i = 0; i < resolution; ++i)
      for (int j = 0; j < resolution; ++j)
        out.values[std::size_t(i) * std::size_t(resolution) + std::size_t(j)] =
            f({(i + 0.5) * w, (j + 0.5) * w});
  }
  return out;
}

double SampledFn::l2_norm() const {
  double s = 0.0;
  for (const auto& v : values) s += std::norm(v);
  const double cell = std::pow(cell_width(), dec->dim());
  return std::sqrt(s * cell);
}

PiecewiseConstantFn project_Pn(const PiecewiseConstantFn& f, int n) {
  if (n > f.dec->depth()) throw std::invalid_argument("project_Pn: level beyond depth");
  if (n >= f.level) return f.at_level(n);
  PiecewiseConstantFn out = PiecewiseConstantFn::zero(f.dec, n);
  const std::int64_t span = ipow(f.dec->p(), f.level - n);
  for (std::int64_t k = 0; k < std::int64_t(out.values.size()); ++k) {
    Complex acc(0.0, 0.0);
    for (std::int64_t j = 0; j < span; ++j) acc += f.values[std::size_t(k * span + j)];
    out.values[std::size_t(k)] = acc / double(span);  // equal cell volumes (A4*)
  }
  return out;
}

PiecewiseConstantFn project_Pn(const SampledFn& f, int n) {
  const auto& dec = *f.dec;
  if (n > dec.depth()) throw std::invalid_argument("project_Pn: level beyond depth");
  PiecewiseConstantFn out = PiecewiseConstantFn::zero(f.dec, n);
  std::vector<std::int64_t> counts(out.values.size(), 0);
  const int R = f.resolution;
  const double w = f.cell_width();
  const int d = dec.dim();
  std::vector<double> x(static_cast<std::size_t>(d));
  const std::int64_t total = d == 1 ? R : std::int64_t(R) * R;
  for (std::int64_t idx = 0; idx < total; ++idx) {
    if (d == 1) {
      x[0] = (double(idx) + 0.5) * w;
    } else {
      x[0] = (double(idx / R) + 0.5) * w;
      x[1] = (double(idx % R) + 0.5) * w;
    }
    const std::int64_t k = dec.cell_of_point(x, n);
    out.values[std::size_t(k)] += f.values[std::size_t(idx)];
    ++counts[std::size_t(k)];
  }
  for (std::size_t k = 0; k < out.values.size(); ++k) {
    if (counts[k] == 0) throw std::logic_error("project_Pn: grid does not resolve a cell");
    out.values[k] /= double(counts[k]);
  }
  return out;
}

namespace {

template <class Fn>
PiecewiseConstantFn detail_impl(const Fn& f, int n) {
  PiecewiseConstantFn pn = project_Pn(f, n);
  if (n == 0) return pn;
  const PiecewiseConstantFn prev = project_Pn(f, n - 1).at_level(n);
  for (std::size_t i = 0; i < pn.values.size(); ++i) pn.values[i] -= prev.values[i];
  return pn;
}

}  // namespace

PiecewiseConstantFn detail_Qn(const PiecewiseConstantFn& f, int n) { return detail_impl(f, n); }
PiecewiseConstantFn detail_Qn(const SampledFn& f, int n) { return detail_impl(f, n); }

namespace {

// || f - P_n f ||^2 computed termwise on f's own carrier (no Pythagoras
// subtraction, so resolved scales vanish exactly)
double residual2(const PiecewiseConstantFn& f, const PiecewiseConstantFn& pn) {
  if (pn.level >= f.level) return 0.0;
  const PiecewiseConstantFn fine = pn.at_level(f.level);
  double s = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) s += std::norm(f.values[i] - fine.values[i]);
  return s * f.dec->cell_volume(f.level);
}

double residual2(const SampledFn& f, const PiecewiseConstantFn& pn) {
  const auto& dec = *f.dec;
  const int R = f.resolution;
  const int d = dec.dim();
  const double w = f.cell_width();
  std::vector<double> x(static_cast<std::size_t>(d));
  const std::int64_t total = d == 1 ? R : std::int64_t(R) * R;
  double s = 0.0;
  for (std::int64_t idx = 0; idx < total; ++idx) {
    if (d == 1) {
      x[0] = (double(idx) + 0.5) * w;
    } else {
      x[0] = (double(idx / R) + 0.5) * w;
      x[1] = (double(idx % R) + 0.5) * w;
    }
    const std::int64_t k = dec.cell_of_point(x, pn.level);
    s += std::norm(f.values[std::size_t(idx)] - pn.values[std::size_t(k)]);
  }
  return s * std::pow(w, d);
}

template <class Fn>
ApproxNorm approx_norm_impl(const Fn& f, double r) {
  const auto& dec = *f.dec;
  const double d = double(dec.dim());
  ApproxNorm out;

  double xi2 = 0.0, zeta2 = 0.0;
  double last_xi = 0.0, last_zeta = 0.0;
  PiecewiseConstantFn prev = PiecewiseConstantFn::zero(f.dec, 0);
  for (int n = 0; n <= dec.depth(); ++n) {
    const PiecewiseConstantFn pn = project_Pn(f, n);
    if (n == 0) xi2 += std::norm(pn.values[0]) * dec.domain_volume();  // ||P_0 f||^2

    const double xi = std::pow(double(dec.p()), double(n) * r / d) * std::sqrt(residual2(f, pn));
    xi2 += xi * xi;
    last_xi = xi;

    double qn2;
    if (n == 0) {
      qn2 = std::norm(pn.values[0]) * dec.domain_volume();
    } else {
      const PiecewiseConstantFn prev_fine = prev.at_level(n);
      double s = 0.0;
      for (std::size_t i = 0; i < pn.values.size(); ++i)
        s += std::norm(pn.values[i] - prev_fine.values[i]);
      qn2 = s * dec.cell_volume(n);
    }
    const double zeta = std::pow(double(dec.p()), double(n) * r / d) * std::sqrt(qn2);
    zeta2 += zeta * zeta;
    last_zeta = zeta;
    prev = pn;
  }
  out.a_r = std::sqrt(xi2);
  out.a_r_viaQ = std::sqrt(zeta2);
  out.tail_xi = last_xi;
  out.tail_zeta = last_zeta;
  out.resolved = last_xi <= 0.01 * out.a_r && last_zeta <= 0.01 * out.a_r_viaQ;
  return out;
}

}  // namespace

ApproxNorm approx_norm(const PiecewiseConstantFn& f, double r) {
  return approx_norm_impl(f, r);
}

ApproxNorm approx_norm(const SampledFn& f, double r) {
  return approx_norm_impl(f, r);
}

namespace {

// || f(.+h) - f ||^2_{L2((0,1) cap ((0,1)-h))} for a piecewise-constant f on
// R uniform cells; exact via the merged breakpoint list
double shift_diff2_1d(const std::vector<Complex>& v, double w, double h) {
  const int R = int(v.size());
  const double lo = std::max(0.0, -h), hi = std::min(1.0, 1.0 - h);
  if (hi <= lo) return 0.0;
  double acc = 0.0;
  double x = lo;
  while (x < hi - 1e-15) {
    const int i = std::min(int(x / w), R - 1);
    const int j = std::min(int((x + h) / w), R - 1);
    const double next = std::min({hi, (i + 1) * w, (j + 1) * w - h});
    const double step = next - x;
    if (step <= 0.0) break;  // guards FP stalls on breakpoint ties
    acc += std::norm(v[std::size_t(j)] - v[std::size_t(i)]) * step;
    x = next;
  }
  return acc;
}

double modulus_1d(const std::vector<Complex>& v, double w, double t) {
  double best = 0.0;
  for (const double radius : {t, t / 2.0, t / 4.0})
    for (const double sgn : {1.0, -1.0})
      best = std::max(best, shift_diff2_1d(v, w, sgn * radius));
  return std::sqrt(best);
}

// d = 2 grid carrier, shifts snapped to whole grid cells
double modulus_2d(const std::vector<Complex>& v, int R, double t) {
  const double w = 1.0 / double(R);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const double dirs[4][2] = {{1, 0}, {0, 1}, {inv_sqrt2, inv_sqrt2}, {inv_sqrt2, -inv_sqrt2}};
  double best = 0.0;
  for (const double radius : {t, t / 2.0, t / 4.0}) {
    for (const auto& dir : dirs) {
      for (const double sgn : {1.0, -1.0}) {
        const long gi = std::lround(sgn * radius * dir[0] / w);
        const long gj = std::lround(sgn * radius * dir[1] / w);
        if (gi == 0 && gj == 0) continue;
        if (double(gi) * double(gi) + double(gj) * double(gj) > (radius / w) * (radius / w) + 1e-9)
          continue;  // keep |h| <= t after snapping
        double acc = 0.0;
        for (int i = std::max(0L, -gi); i < std::min(long(R), long(R) - gi); ++i)
          for (int j = std::max(0L, -gj); j < std::min(long(R), long(R) - gj); ++j)
            acc += std::norm(v[std::size_t(i + gi) * std::size_t(R) + std::size_t(j + gj)] -
                             v[std::size_t(i) * std::size_t(R) + std::size_t(j)]);
        best = std::max(best, acc * w * w);
      }
    }
  }
  return std::sqrt(best);
}

}  // namespace

double modulus_of_smoothness(const PiecewiseConstantFn& f, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("modulus_of_smoothness: t must be positive");
  if (f.dec->dim() == 1)
    return modulus_1d(f.values, f.dec->cell_volume(f.level), t);
  // represent on an aligned square grid: generations split axes in turn
  const int splits = (f.level + f.dec->dim() - 1) / f.dec->dim();
  const int R = int(ipow(f.dec->p(), splits));
  std::vector<Complex> grid(std::size_t(R) * std::size_t(R));
  const double w = 1.0 / double(R);
  for (int i = 0; i < R; ++i)
    for (int j = 0; j < R; ++j) {
      const std::int64_t k = f.dec->cell_of_point({(i + 0.5) * w, (j + 0.5) * w}, f.level);
      grid[std::size_t(i) * std::size_t(R) + std::size_t(j)] = f.values[std::size_t(k)];
    }
  return modulus_2d(grid, R, t);
}

double modulus_of_smoothness(const SampledFn& f, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("modulus_of_smoothness: t must be positive");
  if (f.dec->dim() == 1) return modulus_1d(f.values, f.cell_width(), t);
  return modulus_2d(f.values, f.resolution, t);
}

namespace {

template <class Fn>
BesovNorm besov_impl(const Fn& f, double s, double l2) {
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("besov_norm: s must lie in (0,1)");
  const auto& dec = *f.dec;
  const double d = double(dec.dim());
  const int J = dec.depth();
  BesovNorm out;
  double sum2 = 0.0;
  std::vector<double> W(std::size_t(J) + 1);
  for (int j = 0; j <= J; ++j) {
    const double t = std::pow(double(dec.p()), -double(j) / d);
    W[std::size_t(j)] = std::pow(double(dec.p()), s * double(j) / d) * modulus_of_smoothness(f, t);
    sum2 += W[std::size_t(j)] * W[std::size_t(j)];
  }
  out.value = l2 + std::sqrt(sum2);
  out.tail = W[std::size_t(J)];
  out.resolved = out.tail <= 0.01 * std::sqrt(sum2);
  // growth test on the last terms
  out.diverging = J >= 2 && W[std::size_t(J)] >= W[std::size_t(J - 1)] * 0.999 &&
                  W[std::size_t(J - 1)] >= W[std::size_t(J - 2)] * 0.999 &&
                  W[std::size_t(J)] > 0.0;
  return out;
}

}  // namespace

BesovNorm besov_norm(const PiecewiseConstantFn& f, double s) { return besov_impl(f, s, f.l2_norm()); }
BesovNorm besov_norm(const SampledFn& f, double s) { return besov_impl(f, s, f.l2_norm()); }

EquivalenceReport equivalence_report(const std::vector<PiecewiseConstantFn>& family,
                                     const std::vector<std::string>& ids, double r,
                                     std::uint64_t seed) {
  if (!(r > 0.0 && r < 0.5))
    throw std::invalid_argument("equivalence_report: r must lie in (0, 1/2)");
  if (ids.size() != family.size())
    throw std::invalid_argument("equivalence_report: one id per family member");
  (void)seed;  // reserved for future d = 2 Monte Carlo paths
  EquivalenceReport rep;
  double lo_ab = 0.0, hi_ab = 0.0, lo_ag = 0.0, hi_ag = 0.0, lo_bg = 0.0, hi_bg = 0.0;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto& f = family[i];
    EquivalenceRow row;
    row.id = ids[i];
    row.a_r = approx_norm(f, r).a_r;
    row.besov = besov_norm(f, r).value;
    const GagliardoResult g = gagliardo_seminorm(f, r);
    row.gagliardo = f.l2_norm() + g.seminorm;
    row.ratio_a_besov = row.a_r / row.besov;
    row.ratio_a_gagliardo = row.a_r / row.gagliardo;
    row.ratio_besov_gagliardo = row.besov / row.gagliardo;
    const bool first = rep.rows.empty();
    lo_ab = first ? row.ratio_a_besov : std::min(lo_ab, row.ratio_a_besov);
    hi_ab = first ? row.ratio_a_besov : std::max(hi_ab, row.ratio_a_besov);
    lo_ag = first ? row.ratio_a_gagliardo : std::min(lo_ag, row.ratio_a_gagliardo);
    hi_ag = first ? row.ratio_a_gagliardo : std::max(hi_ag, row.ratio_a_gagliardo);
    lo_bg = first ? row.ratio_besov_gagliardo : std::min(lo_bg, row.ratio_besov_gagliardo);
    hi_bg = first ? row.ratio_besov_gagliardo : std::max(hi_bg, row.ratio_besov_gagliardo);
    rep.rows.push_back(std::move(row));
  }
  rep.bracket_a_besov = lo_ab > 0.0 ? hi_ab / lo_ab : 1.0;
  rep.bracket_a_gagliardo = lo_ag > 0.0 ? hi_ag / lo_ag : 1.0;
  rep.bracket_besov_gagliardo = lo_bg > 0.0 ? hi_bg / lo_bg : 1.0;
  return rep;
}

}  // namespace treetrace
