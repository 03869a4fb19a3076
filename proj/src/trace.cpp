#include "treetrace/trace.hpp"

#include <cmath>
#include <stdexcept>

namespace treetrace {

namespace {

std::int64_t ipow(std::int64_t base, int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

void require_geometric_gate(const TreeFunction& f) {
  if (f.tree()->kind() != TreeKind::geometric)
    throw std::invalid_argument("tau: defined on the geometric tree (transport first)");
  if (!f.tree()->params().gate())
    throw std::domain_error("tau: requires the gate ell < alpha p < 1/ell");
}

}  // namespace

double TraceCoefficients::l2r_norm(double r) const {
  double s = 0.0;
  for (const auto& [z, a] : entries)
    s += std::pow(double(params.p), 2.0 * r * double(z.nu)) * std::norm(a);
  return std::sqrt(s);
}

int TraceCoefficients::max_nu() const {
  int m = -1;
  for (const auto& [z, a] : entries) m = std::max(m, z.nu);
  return m;
}

TraceCoefficients& TraceCoefficients::operator+=(const TraceCoefficients& other) {
  for (const auto& [z, a] : other.entries) entries[z] += a;
  return *this;
}

TraceCoefficients& TraceCoefficients::operator*=(Complex c) {
  for (auto& [z, a] : entries) a *= c;
  return *this;
}

double trace_multiplier(const TreeParams& params, const SymmetryIndex& z) {
  const double f = F_infty(params, z);
  return z.is_rad() ? f : std::pow(double(params.p), -0.5 * z.nu) * f;
}

double trace_multiplier_truncated(const TreeParams& params, const SymmetryIndex& z,
                                  int depth) {
  const double tD = (1.0 - std::pow(params.ell, depth + 1)) / (1.0 - params.ell);
  const double f =
      z.is_rad() ? profile_F_rad(params, tD) : profile_F_n(params, z.nu, tD);
  return z.is_rad() ? f : std::pow(double(params.p), -0.5 * z.nu) * f;
}

TraceCoefficients tau(const TreeFunction& f) {
  require_geometric_gate(f);
  const auto& tree = *f.tree();
  const TreeParams& params = tree.params();
  const int p = params.p;
  const int D = tree.depth();

  // Bottom-up subtree sums of the generation-D vertex values. The interior
  // vertices cancel in the telescoped endpoint-difference sums, and the root
  // term is removed by the cutoff, so a_z depends on these sums only.
  std::vector<std::vector<Complex>> S(std::size_t(D) + 1);
  S[std::size_t(D)] = vertex_values(f, D);
  for (int n = D - 1; n >= 0; --n) {
    S[std::size_t(n)].assign(std::size_t(tree.edges_at(n)), Complex(0.0, 0.0));
    for (std::int64_t k = 0; k < tree.edges_at(n); ++k) {
      Complex acc(0.0, 0.0);
      for (int j = 0; j < p; ++j) acc += S[std::size_t(n + 1)][std::size_t(k * p + j)];
      S[std::size_t(n)][std::size_t(k)] = acc;
    }
  }

  const double pD = std::pow(double(p), -D);
  TraceCoefficients out;
  out.params = params;

  // a_rad = c_rad p^-D sum_K f(X_{D,K}); entry = m_rad a_rad
  {
    const SymmetryIndex z = SymmetryIndex::rad();
    const Complex a = profile_derivative_scale(params, z) * pD * S[0][0];
    out.entries[z] = trace_multiplier(params, z) * a;
  }
  // a_{(n,k,s)} = c_n p^-D sum_j conj(theta_s^j) S_{n+1, pk+j}
  for (int n = 0; n < D; ++n) {
    const double cn = profile_derivative_scale(params, SymmetryIndex::triple(n, 0, 1));
    for (std::int64_t k = 0; k < tree.edges_at(n); ++k) {
      for (int s = 1; s < p; ++s) {
        Complex acc(0.0, 0.0);
        for (int j = 0; j < p; ++j)
          acc += std::conj(theta_power(p, s, j)) * S[std::size_t(n + 1)][std::size_t(k * p + j)];
        const SymmetryIndex z = SymmetryIndex::triple(n, k, s);
        out.entries[z] = trace_multiplier(params, z) * (cn * pD * acc);
      }
    }
  }
  return out;
}

TraceCoefficients tau_vertex(const TreeFunction& f, int N) {
  return tau(extend_by_constants(f, N));
}

TraceCoefficients tau_perturbed(const TreeFunction& f) {
  const auto& tree = *f.tree();
  if (tree.kind() != TreeKind::perturbed)
    throw std::invalid_argument("tau_perturbed: expected a perturbed tree");
  auto geom = std::make_shared<TreeTopology>(
      TreeTopology::geometric(tree.params(), tree.depth()));
  return tau(transport_to_geometric(f, std::move(geom)));
}

PiecewiseConstantFn identify(const TraceCoefficients& coeffs,
                             std::shared_ptr<const Decomposition> dec, int level) {
  if (!dec) throw std::invalid_argument("identify: null decomposition");
  const int p = coeffs.params.p;
  if (dec->p() != p) throw std::invalid_argument("identify: decomposition p mismatch");
  const int need = coeffs.max_nu() + 1;
  if (level < 0) level = std::max(need, 0);
  if (level < need || level > dec->depth())
    throw std::invalid_argument("identify: level must reach max nu + 1 and fit the depth");

  // top-down accumulation: v_{n+1, pk+j} = v_{n,k} + p^{n/2} sum_s theta_s^j a_{(n,k,s)}
  std::vector<Complex> v(1, coeffs.at(SymmetryIndex::rad()));
  for (int n = 0; n < level; ++n) {
    std::vector<Complex> next(std::size_t(ipow(p, n + 1)), Complex(0.0, 0.0));
    const double scale = std::pow(double(p), 0.5 * n);
    for (std::int64_t k = 0; k < std::int64_t(v.size()); ++k) {
      for (int j = 0; j < p; ++j) {
        Complex add(0.0, 0.0);
        for (int s = 1; s < p; ++s)
          add += theta_power(p, s, j) * coeffs.at(SymmetryIndex::triple(n, k, s));
        next[std::size_t(k * p + j)] = v[std::size_t(k)] + scale * add;
      }
    }
    v = std::move(next);
  }
  PiecewiseConstantFn out = PiecewiseConstantFn::zero(std::move(dec), level);
  out.values = std::move(v);
  return out;
}

TraceCoefficients identify_inverse(const PiecewiseConstantFn& g, const TreeParams& params) {
  const int p = params.p;
  if (g.dec->p() != p)
    throw std::invalid_argument("identify_inverse: decomposition p mismatch");
  const int N = g.level;

  TraceCoefficients out;
  out.params = params;
  // bottom-up cell means; coefficient of e_{(n,k,s)} reads off the character
  // transform of the child means, e_rad the global mean
  std::vector<Complex> mean = g.values;
  for (int n = N - 1; n >= 0; --n) {
    std::vector<Complex> up(std::size_t(ipow(p, n)), Complex(0.0, 0.0));
    const double scale = std::pow(double(p), 0.5 * n);
    for (std::int64_t k = 0; k < std::int64_t(up.size()); ++k) {
      Complex acc(0.0, 0.0);
      for (int j = 0; j < p; ++j) acc += mean[std::size_t(k * p + j)];
      up[std::size_t(k)] = acc / double(p);
      for (int s = 1; s < p; ++s) {
        Complex proj(0.0, 0.0);
        for (int j = 0; j < p; ++j)
          proj += std::conj(theta_power(p, s, j)) * mean[std::size_t(k * p + j)];
        out.entries[SymmetryIndex::triple(n, k, s)] = proj / (scale * double(p));
      }
    }
    mean = std::move(up);
  }
  out.entries[SymmetryIndex::rad()] = mean[0];
  return out;
}

EmbeddedTrace gamma(const TreeFunction& f, std::shared_ptr<const Decomposition> dec, int N) {
  if (N < 0 || N > f.tree()->depth() || N > dec->depth())
    throw std::invalid_argument("gamma: N exceeds the tree or decomposition depth");
  EmbeddedTrace out{identify(tau(f), dec, -1), PiecewiseConstantFn::zero(dec, N), 0.0};
  const std::vector<Complex> values = vertex_values(f, N);
  out.method_b.values = values;
  out.discrepancy_l2 = pcf_distance(out.method_a, out.method_b);
  return out;
}

TreeFunction lift(const PiecewiseConstantFn& g, TreeFunction::Tree tree,
                  int samples_per_edge) {
  const TreeParams& params = tree->params();
  if (!params.gate()) throw std::domain_error("lift: requires the gate");
  if (g.level > tree->depth())
    throw std::invalid_argument("lift: tree depth must reach the data level");
  const TraceCoefficients coeffs = identify_inverse(g, params);

  TreeFunction f(tree, samples_per_edge);
  for (const auto& [z, a] : coeffs.entries) {
    if (std::abs(a) == 0.0) continue;
    const Complex weight = a / trace_multiplier_truncated(params, z, tree->depth());
    f += weight * harmonic_basis_function(z, tree, samples_per_edge);
  }
  return f;
}

}  // namespace treetrace
