#include "treetrace/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace treetrace {

namespace {

std::int64_t ipow(std::int64_t base, int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

double Cell::volume() const {
  double v = 1.0;
  for (std::size_t i = 0; i < lo.size(); ++i) v *= hi[i] - lo[i];
  return v;
}

double Cell::diameter() const {
  double d2 = 0.0;
  for (std::size_t i = 0; i < lo.size(); ++i) d2 += (hi[i] - lo[i]) * (hi[i] - lo[i]);
  return std::sqrt(d2);
}

bool Cell::contains(const Cell& other) const {
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (other.lo[i] < lo[i] - 1e-14 || other.hi[i] > hi[i] + 1e-14) return false;
  return true;
}

double box_distance(const Cell& a, const Cell& b) {
  double d2 = 0.0;
  for (std::size_t i = 0; i < a.lo.size(); ++i) {
    const double gap = std::max({0.0, b.lo[i] - a.hi[i], a.lo[i] - b.hi[i]});
    d2 += gap * gap;
  }
  return std::sqrt(d2);
}

double box_overlap(const Cell& a, const Cell& b) {
  double v = 1.0;
  for (std::size_t i = 0; i < a.lo.size(); ++i) {
    const double w = std::min(a.hi[i], b.hi[i]) - std::max(a.lo[i], b.lo[i]);
    if (w <= 0.0) return 0.0;
    v *= w;
  }
  return v;
}

double box_shift_loss(const Cell& a, const std::vector<double>& h) {
  double kept = 1.0;
  for (std::size_t i = 0; i < a.lo.size(); ++i)
    kept *= std::max(0.0, (a.hi[i] - a.lo[i]) - std::abs(h[i]));
  return a.volume() - kept;
}

Decomposition::Decomposition(int d, int p, int depth) : d_(d), p_(p), depth_(depth) {
  if (d < 1) throw std::invalid_argument("Decomposition: dimension must be >= 1");
  if (p < 2) throw std::invalid_argument("Decomposition: p must be >= 2");
  if (depth < 0) throw std::invalid_argument("Decomposition: depth must be >= 0");
  if (depth > 62 || ipow(p, depth) > (std::int64_t(1) << 40))
    throw std::invalid_argument("Decomposition: depth too large");
}

Decomposition Decomposition::interval(int p, int depth) { return Decomposition(1, p, depth); }

Decomposition Decomposition::hypercube(int d, int p, int depth) {
  return Decomposition(d, p, depth);
}

std::int64_t Decomposition::cells_at(int n) const {
  if (n < 0 || n > depth_) throw std::out_of_range("Decomposition::cells_at: bad generation");
  return ipow(p_, n);
}

double Decomposition::cell_volume(int n) const {
  cells_at(n);
  return std::pow(double(p_), -n);
}

Cell Decomposition::cell(int n, std::int64_t k) const {
  if (n < 0 || n > depth_ || k < 0 || k >= cells_at(n))
    throw std::out_of_range("Decomposition::cell: bad index");
  Cell c;
  c.lo.assign(std::size_t(d_), 0.0);
  c.hi.assign(std::size_t(d_), 1.0);
  // digits of k in base p, most significant first = earliest split
  for (int step = 1; step <= n; ++step) {
    const int axis = (step - 1) % d_;
    const std::int64_t digit = (k / ipow(p_, n - step)) % p_;
    const double w = (c.hi[std::size_t(axis)] - c.lo[std::size_t(axis)]) / double(p_);
    c.lo[std::size_t(axis)] += w * double(digit);
    c.hi[std::size_t(axis)] = c.lo[std::size_t(axis)] + w;
  }
  return c;
}

std::int64_t Decomposition::cell_of_point(const std::vector<double>& x, int n) const {
  if (int(x.size()) != d_)
    throw std::invalid_argument("Decomposition::cell_of_point: wrong dimension");
  if (n < 0 || n > depth_)
    throw std::out_of_range("Decomposition::cell_of_point: bad generation");
  for (int i = 0; i < d_; ++i)
    if (!(x[std::size_t(i)] > 0.0 && x[std::size_t(i)] < 1.0))
      throw std::invalid_argument("Decomposition::cell_of_point: point outside the domain");

  std::vector<double> lo(std::size_t(d_), 0.0), hi(std::size_t(d_), 1.0);
  std::int64_t k = 0;
  for (int step = 1; step <= n; ++step) {
    const int axis = (step - 1) % d_;
    const double u = (x[std::size_t(axis)] - lo[std::size_t(axis)]) /
                     (hi[std::size_t(axis)] - lo[std::size_t(axis)]) * double(p_);
    const double nearest = std::round(u);
    if (nearest > 0.0 && nearest < double(p_) && std::abs(u - nearest) < 1e-12)
      throw std::runtime_error("Decomposition::cell_of_point: point on a cell boundary");
    const std::int64_t digit = std::min<std::int64_t>(std::int64_t(u), p_ - 1);
    const double w = (hi[std::size_t(axis)] - lo[std::size_t(axis)]) / double(p_);
    lo[std::size_t(axis)] += w * double(digit);
    hi[std::size_t(axis)] = lo[std::size_t(axis)] + w;
    k = k * p_ + digit;
  }
  return k;
}

double DecompositionDiagnostics::c1_from(int n0) const {
  double m = 0.0;
  for (std::size_t n = std::size_t(n0); n < c1_by_generation.size(); ++n)
    m = std::max(m, c1_by_generation[n]);
  return m;
}

double DecompositionDiagnostics::c2_from(int n0) const {
  double m = 0.0;
  for (std::size_t n = std::size_t(n0); n < c2_by_generation.size(); ++n)
    m = std::max(m, c2_by_generation[n]);
  return m;
}

DecompositionDiagnostics diagnostics(const Decomposition& dec) {
  DecompositionDiagnostics out;
  const int d = dec.dim();

  // fixed direction set: +-axes and normalized diagonals
  std::vector<std::vector<double>> dirs;
  for (int i = 0; i < d; ++i) {
    std::vector<double> e(std::size_t(d), 0.0);
    e[std::size_t(i)] = 1.0;
    dirs.push_back(e);
    e[std::size_t(i)] = -1.0;
    dirs.push_back(e);
  }
  if (d > 1) {
    const std::int64_t corners = ipow(2, d);
    for (std::int64_t c = 0; c < corners; ++c) {
      std::vector<double> e(static_cast<std::size_t>(d));
      for (int i = 0; i < d; ++i) e[std::size_t(i)] = (c >> i) & 1 ? -1.0 : 1.0;
      const double norm = std::sqrt(double(d));
      for (auto& v : e) v /= norm;
      dirs.push_back(e);
    }
  }

  for (int n = 0; n <= dec.depth(); ++n) {
    const std::int64_t count = dec.cells_at(n);
    const double scale = std::pow(double(dec.p()), double(n) / double(d));

    double c1 = 0.0, c2 = 0.0;
    for (std::int64_t k = 0; k < count; ++k) {
      const Cell c = dec.cell(n, k);
      c1 = std::max(c1, c.diameter() * scale);
      // (A6) certificate over |h| in {p^{-n/d} 2^{-q}}
      for (const auto& dir : dirs) {
        double radius = 1.0 / scale;
        for (int q = 0; q < 8; ++q) {
          std::vector<double> h(static_cast<std::size_t>(d));
          for (int i = 0; i < d; ++i) h[std::size_t(i)] = dir[std::size_t(i)] * radius;
          const double loss = box_shift_loss(c, h);
          c2 = std::max(c2, loss * std::pow(double(dec.p()), double(n) * double(d - 1) / double(d)) /
                                radius);
          radius *= 0.5;
        }
      }
    }
    out.c1_by_generation.push_back(c1);
    out.c2_by_generation.push_back(c2);

    // neighbor count within p^{-n/d}, excluding the cell itself
    int K = 0;
    const double reach = 1.0 / scale;
    std::vector<Cell> cells;
    cells.reserve(std::size_t(count));
    for (std::int64_t k = 0; k < count; ++k) cells.push_back(dec.cell(n, k));
    for (std::int64_t k = 0; k < count; ++k) {
      int local = 0;
      for (std::int64_t j = 0; j < count; ++j)
        if (j != k && box_distance(cells[std::size_t(k)], cells[std::size_t(j)]) <= reach + 1e-14)
          ++local;
      K = std::max(K, local);
    }
    out.neighbors_by_generation.push_back(K);
  }

  out.c1_observed = out.c1_from(0);
  out.c2_observed = out.c2_from(0);
  out.K_observed = *std::max_element(out.neighbors_by_generation.begin(),
                                     out.neighbors_by_generation.end());
  return out;
}

}  // namespace treetrace
