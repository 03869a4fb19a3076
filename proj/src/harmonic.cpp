#include "treetrace/harmonic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace treetrace {

namespace {

std::int64_t ipow(std::int64_t base, int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

void require_gate(const TreeParams& params) {
  if (!params.gate())
    throw std::domain_error("harmonic profiles require the gate ell < alpha p < 1/ell");
}

// x = ell/(alpha p), the ratio of the geometric tail series
double tail_ratio(const TreeParams& params) { return params.ell / (params.alpha * params.p); }

// Iq(n) = int_{t_n}^L dt/q(t) = x^{n+1}/(1-x), with Iq(-1) covering (0,L)
double inv_q_tail(const TreeParams& params, int n) {
  const double x = tail_ratio(params);
  return std::pow(x, n + 1) / (1.0 - x);
}

// generation of t: the n with t_{n-1} < t <= t_n
int generation_of(const TreeParams& params, double t) {
  if (!(t > 0.0 && t < params.height()))
    throw std::domain_error("radial coordinate outside (0, L)");
  double tn = 1.0, len = 1.0;
  int n = 0;
  while (t > tn) {
    len *= params.ell;
    tn += len;
    ++n;
    if (n > 4096) throw std::domain_error("radial coordinate too close to L");
  }
  return n;
}

}  // namespace

Complex theta_power(int p, int s, long long j) {
  const long long r = ((j * s) % p + p) % p;
  if (p == 2) return r == 0 ? Complex(1.0, 0.0) : Complex(-1.0, 0.0);
  return std::polar(1.0, 2.0 * std::numbers::pi * double(r) / double(p));
}

std::vector<SymmetryIndex> symmetry_indices(int p, int max_nu) {
  std::vector<SymmetryIndex> zs;
  zs.push_back(SymmetryIndex::rad());
  for (int n = 0; n <= max_nu; ++n)
    for (std::int64_t k = 0; k < ipow(p, n); ++k)
      for (int s = 1; s < p; ++s) zs.push_back(SymmetryIndex::triple(n, k, s));
  return zs;
}

double weight_q(const TreeParams& params, double t) {
  return std::pow(params.alpha * params.p, generation_of(params, t));
}

double profile_derivative_scale(const TreeParams& params, const SymmetryIndex& z) {
  require_gate(params);
  const double ap = params.alpha * params.p;
  if (z.is_rad()) return std::sqrt(1.0 - params.ell / ap);
  const int n = z.nu;
  return std::pow(double(params.p), n) * std::pow(params.alpha / params.ell, 0.5 * n) *
         std::sqrt((ap - params.ell) / params.ell);
}

double F_infty(const TreeParams& params, const SymmetryIndex& z) {
  require_gate(params);
  const double ap = params.alpha * params.p;
  if (z.is_rad()) return std::sqrt(ap / (ap - params.ell));
  return std::sqrt(params.ell / (ap - params.ell) *
                   std::pow(params.ell / params.alpha, z.nu));
}

double profile_F_rad(const TreeParams& params, double t) {
  require_gate(params);
  const double ap = params.alpha * params.p;
  const double x = params.ell / ap;
  const int n = generation_of(params, t);
  const double t_prev = (1.0 - std::pow(params.ell, n)) / (1.0 - params.ell);  // t_{n-1}
  const double partial = (1.0 - std::pow(x, n)) / (1.0 - x);  // sum_{k<n} x^k
  return profile_derivative_scale(params, SymmetryIndex::rad()) *
         ((t - t_prev) / std::pow(ap, n) + partial);
}

double profile_F_n(const TreeParams& params, int n, double t) {
  require_gate(params);
  const double ap = params.alpha * params.p;
  const double x = params.ell / ap;
  const int g = generation_of(params, t);
  if (g <= n) throw std::domain_error("profile_F_n: t outside the support (t_n, L)");
  const int m = g - n;
  const double t_prev = (1.0 - std::pow(params.ell, g)) / (1.0 - params.ell);  // t_{g-1}
  // sum_{k=1}^{m-1} x^{n+k}
  const double partial = std::pow(x, n + 1) * (1.0 - std::pow(x, m - 1)) / (1.0 - x);
  return profile_derivative_scale(params, SymmetryIndex::triple(n, 0, 1)) *
         ((t - t_prev) / std::pow(ap, g) + partial);
}

RadialProfile harmonic_profile(const TreeParams& params, const SymmetryIndex& z,
                               int depth, int samples_per_edge) {
  require_gate(params);
  if (!z.is_rad() && z.nu >= depth)
    throw std::invalid_argument("harmonic_profile: nu(z) must be < depth");
  RadialProfile F;
  F.start = z.nu;
  F.depth = depth;
  F.m = samples_per_edge;
  F.tail_derivative = profile_derivative_scale(params, z);
  double tn = 0.0, len = 1.0;  // t_{g-1} and ell^g while iterating g
  for (int g = 0; g <= depth; ++g) {
    if (g > F.start) {
      std::vector<Complex> row(static_cast<std::size_t>(samples_per_edge));
      for (int i = 0; i < samples_per_edge; ++i) {
        const double t = tn + len * double(i) / double(samples_per_edge - 1);
        // F vanishes at the left endpoint of its support
        const double v = (g == F.start + 1 && i == 0)
                             ? 0.0
                             : (z.is_rad() ? profile_F_rad(params, t)
                                           : profile_F_n(params, z.nu, t));
        row[std::size_t(i)] = v;
      }
      F.values.push_back(std::move(row));
    }
    tn += len;
    len *= params.ell;
  }
  return F;
}

double profile_l2_norm2(const RadialProfile& F, const TreeParams& params) {
  const double ap = params.alpha * params.p;
  const double wfac = std::pow(double(params.p), -std::max(F.start, 0));
  double total = 0.0;
  double tn = 0.0, len = 1.0, q = 1.0;
  for (int g = 0; g <= F.depth; ++g) {
    if (g > F.start) {
      const auto& row = F.values[std::size_t(g - F.start - 1)];
      const double h = len / double(F.m - 1);
      double acc = 0.0;
      for (int i = 0; i + 1 < F.m; ++i) {
        const Complex u = row[std::size_t(i)], v = row[std::size_t(i + 1)];
        acc += h / 3.0 * (std::norm(u) + (u * std::conj(v)).real() + std::norm(v));
      }
      total += q * acc;
    }
    tn += len;
    len *= params.ell;
    q *= ap;
  }
  return wfac * total;
}

double profile_h1_semi_norm2(const RadialProfile& F, const TreeParams& params) {
  const double ap = params.alpha * params.p;
  const double wfac = std::pow(double(params.p), -std::max(F.start, 0));
  double total = 0.0;
  double len = 1.0, q = 1.0;
  for (int g = 0; g <= F.depth; ++g) {
    if (g > F.start) {
      const auto& row = F.values[std::size_t(g - F.start - 1)];
      const double h = len / double(F.m - 1);
      double acc = 0.0;
      for (int i = 0; i + 1 < F.m; ++i)
        acc += std::norm(row[std::size_t(i + 1)] - row[std::size_t(i)]) / h;
      total += q * acc;
    }
    len *= params.ell;
    q *= ap;
  }
  if (F.tail_derivative)
    total += *F.tail_derivative * *F.tail_derivative * inv_q_tail(params, F.depth);
  return wfac * total;
}

TreeFunction synth(const SymmetryIndex& z, const RadialProfile& F,
                   TreeFunction::Tree tree) {
  if (tree->kind() != TreeKind::geometric)
    throw std::invalid_argument("synth: symmetry lifts are defined on the geometric tree");
  if (F.start != z.nu || F.depth != tree->depth())
    throw std::invalid_argument("synth: profile support does not match the index");
  if (!z.is_rad() && std::abs(F.left_value()) > 1e-10)
    throw std::invalid_argument("synth: character profiles must vanish at t_n");

  const int p = tree->p();
  TreeFunction f(tree, F.m);
  auto& data = f.mutable_data();
  for (std::int64_t i = 0; i < tree->edge_count(); ++i) {
    const EdgeId e = tree->edge_at(i);
    if (e.n <= z.nu) continue;
    Complex factor(1.0, 0.0);
    if (!z.is_rad()) {
      if (!subtree_contains(z.edge(), e, p) || e.n == z.nu) continue;
      const int j = e.n == z.nu + 1 ? int(e.k - z.k * p) : *subtree_branch(z.edge(), e, p);
      factor = theta_power(p, z.s, j);
    }
    const auto& row = F.values[std::size_t(e.n - z.nu - 1)];
    for (int q = 0; q < F.m; ++q)
      data[std::size_t(i) * std::size_t(F.m) + std::size_t(q)] = factor * row[std::size_t(q)];
  }
  return f;
}

TreeFunction harmonic_basis_function(const SymmetryIndex& z, TreeFunction::Tree tree,
                                     int samples_per_edge) {
  return synth(z, harmonic_profile(tree->params(), z, tree->depth(), samples_per_edge),
               tree);
}

RadialProfile analyze(const TreeFunction& f, const SymmetryIndex& z) {
  const auto& tree = *f.tree();
  if (tree.kind() != TreeKind::geometric)
    throw std::invalid_argument("analyze: symmetry averages are defined on the geometric tree");
  if (!z.is_rad() && z.nu >= tree.depth())
    throw std::invalid_argument("analyze: nu(z) must be < depth");

  const int p = tree.p();
  const int m = f.samples_per_edge();
  RadialProfile F;
  F.start = z.nu;
  F.depth = tree.depth();
  F.m = m;

  for (int g = z.nu + 1; g <= tree.depth(); ++g) {
    std::vector<Complex> row(std::size_t(m), Complex(0.0, 0.0));
    if (z.is_rad()) {
      for (std::int64_t k = 0; k < tree.edges_at(g); ++k)
        for (int i = 0; i < m; ++i) row[std::size_t(i)] += f.sample({g, k}, i);
      const double scale = 1.0 / double(tree.edges_at(g));
      for (auto& v : row) v *= scale;
    } else {
      const std::int64_t span = ipow(p, g - z.nu - 1);  // edges per branch at generation g
      for (int j = 0; j < p; ++j) {
        const Complex w = std::conj(theta_power(p, z.s, j));
        const std::int64_t k0 = (z.k * p + j) * span;
        for (std::int64_t k = k0; k < k0 + span; ++k)
          for (int i = 0; i < m; ++i) row[std::size_t(i)] += w * f.sample({g, k}, i);
      }
      const double scale = std::pow(double(p), -(g - z.nu));
      for (auto& v : row) v *= scale;
    }
    F.values.push_back(std::move(row));
  }
  return F;
}

TreeFunction project_sector(const TreeFunction& f, const SymmetryIndex& z) {
  return synth(z, analyze(f, z), f.tree());
}

Eigen::MatrixXcd basis_gram(const TreeParams& params,
                            const std::vector<SymmetryIndex>& zs, int depth) {
  require_gate(params);
  for (const auto& z : zs)
    if (z.nu >= depth)
      throw std::invalid_argument("basis_gram: nu(z) must be < depth for every entry");

  const int p = params.p;
  const auto char_sum = [&](int s) {
    Complex acc(0.0, 0.0);
    for (int j = 0; j < p; ++j) acc += theta_power(p, s, j);
    return acc;
  };
  // <phi_z', phi_w'>: the derivative profiles are c/q on their supports, so
  // every entry reduces to a character sum times a geometric tail
  const auto entry = [&](const SymmetryIndex& z, const SymmetryIndex& w) -> Complex {
    const double cz = profile_derivative_scale(params, z);
    const double cw = profile_derivative_scale(params, w);
    if (z.is_rad() && w.is_rad()) return cz * cw * inv_q_tail(params, -1);
    if (!z.is_rad() && w.is_rad())
      return std::pow(double(p), -(z.nu + 1)) * char_sum(z.s) * cz * cw *
             inv_q_tail(params, z.nu);
    if (z.is_rad() && !w.is_rad())
      return std::pow(double(p), -(w.nu + 1)) * std::conj(char_sum(w.s)) * cz * cw *
             inv_q_tail(params, w.nu);
    if (z.edge() == w.edge()) {
      Complex cs(0.0, 0.0);
      for (int j = 0; j < p; ++j)
        cs += theta_power(p, z.s, j) * std::conj(theta_power(p, w.s, j));
      return std::pow(double(p), -(z.nu + 1)) * cs * cz * cw * inv_q_tail(params, z.nu);
    }
    if (subtree_contains(w.edge(), z.edge(), p) && z.nu > w.nu) {
      const int jw = *subtree_branch(w.edge(), z.edge(), p);
      return std::pow(double(p), -(z.nu + 1)) * std::conj(theta_power(p, w.s, jw)) *
             char_sum(z.s) * cz * cw * inv_q_tail(params, z.nu);
    }
    if (subtree_contains(z.edge(), w.edge(), p) && w.nu > z.nu) {
      const int jz = *subtree_branch(z.edge(), w.edge(), p);
      return std::conj(std::pow(double(p), -(w.nu + 1)) * std::conj(theta_power(p, z.s, jz)) *
                       char_sum(w.s) * cz * cw * inv_q_tail(params, w.nu));
    }
    return Complex(0.0, 0.0);  // disjoint supports
  };

  const Eigen::Index n = Eigen::Index(zs.size());
  Eigen::MatrixXcd G(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      G(i, j) = entry(zs[std::size_t(i)], zs[std::size_t(j)]);
  return G;
}

}  // namespace treetrace
