#include "treetrace/tree_function.hpp"

#include <cmath>
#include <stdexcept>

namespace treetrace {

TreeFunction::TreeFunction(Tree tree, int samples_per_edge)
    : tree_(std::move(tree)), m_(samples_per_edge) {
  if (!tree_) throw std::invalid_argument("TreeFunction: null tree");
  if (m_ < 2) throw std::invalid_argument("TreeFunction: samples_per_edge must be >= 2");
  values_.assign(std::size_t(tree_->edge_count()) * std::size_t(m_), Complex(0.0, 0.0));
}

TreeFunction TreeFunction::from_samples(Tree tree, int samples_per_edge,
                                        std::vector<std::vector<Complex>> values) {
  TreeFunction f(std::move(tree), samples_per_edge);
  const auto& topo = *f.tree_;
  if (std::int64_t(values.size()) != topo.edge_count())
    throw std::invalid_argument("TreeFunction: sample table must cover every edge");
  for (std::int64_t i = 0; i < topo.edge_count(); ++i) {
    if (int(values[std::size_t(i)].size()) != samples_per_edge)
      throw std::invalid_argument("TreeFunction: wrong number of samples on an edge");
    for (int j = 0; j < samples_per_edge; ++j)
      f.values_[std::size_t(i) * std::size_t(samples_per_edge) + std::size_t(j)] =
          values[std::size_t(i)][std::size_t(j)];
  }
  f.validate_continuity();
  return f;
}

TreeFunction TreeFunction::constant(Tree tree, int samples_per_edge, Complex value) {
  TreeFunction f(std::move(tree), samples_per_edge);
  for (auto& v : f.values_) v = value;
  return f;
}

TreeFunction TreeFunction::radial(Tree tree, int samples_per_edge,
                                  const std::function<Complex(double)>& F) {
  TreeFunction f(std::move(tree), samples_per_edge);
  const auto& topo = *f.tree_;
  const int m = samples_per_edge;
  for (std::int64_t i = 0; i < topo.edge_count(); ++i) {
    const EdgeId e = topo.edge_at(i);
    const auto [a, b] = topo.edge_interval(e);
    for (int j = 0; j < m; ++j) {
      const double t = a + (b - a) * double(j) / double(m - 1);
      f.values_[std::size_t(i) * std::size_t(m) + std::size_t(j)] = F(t);
    }
  }
  return f;
}

void TreeFunction::validate_continuity() const {
  const auto& topo = *tree_;
  for (std::int64_t i = 0; i < topo.edge_count(); ++i) {
    const EdgeId e = topo.edge_at(i);
    if (e.n == topo.depth()) continue;
    const Complex end = sample(e, m_ - 1);
    for (const EdgeId c : children(e, topo.p())) {
      if (std::abs(sample(c, 0) - end) > 1e-12)
        throw std::invalid_argument("TreeFunction: vertex continuity violated at X_{" +
                                    std::to_string(e.n) + "," + std::to_string(e.k) + "}");
    }
  }
}

Complex TreeFunction::operator()(TreePoint x) const {
  const auto [a, b] = tree_->edge_interval(x.edge);
  double u = (x.t - a) / (b - a) * double(m_ - 1);
  if (u < -1e-9 || u > double(m_ - 1) + 1e-9)
    throw std::invalid_argument("TreeFunction: point outside the edge interval");
  u = std::min(std::max(u, 0.0), double(m_ - 1));
  const int i = std::min(int(u), m_ - 2);
  const double s = u - double(i);
  return (1.0 - s) * sample(x.edge, i) + s * sample(x.edge, i + 1);
}

TreeFunction& TreeFunction::operator+=(const TreeFunction& other) {
  if (tree_ != other.tree_ || m_ != other.m_)
    throw std::invalid_argument("TreeFunction: incompatible operands");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

TreeFunction& TreeFunction::operator*=(Complex c) {
  for (auto& v : values_) v *= c;
  return *this;
}

namespace {

// integral over one subinterval of length h of the product of two linear
// interpolants, f = u0..u1, conj(g) = v0..v1; exact
Complex segment_l2(Complex u0, Complex u1, Complex v0, Complex v1, double h) {
  const Complex cv0 = std::conj(v0), cv1 = std::conj(v1);
  return h / 6.0 * (2.0 * u0 * cv0 + u0 * cv1 + u1 * cv0 + 2.0 * u1 * cv1);
}

}  // namespace

Complex l2_inner(const TreeFunction& f, const TreeFunction& g) {
  if (f.tree() != g.tree() || f.samples_per_edge() != g.samples_per_edge())
    throw std::invalid_argument("l2_inner: incompatible operands");
  const auto& topo = *f.tree();
  const int m = f.samples_per_edge();
  Complex total(0.0, 0.0);
  for (std::int64_t i = 0; i < topo.edge_count(); ++i) {
    const EdgeId e = topo.edge_at(i);
    const double h = topo.edge_length(e) / double(m - 1);
    Complex acc(0.0, 0.0);
    for (int j = 0; j + 1 < m; ++j)
      acc += segment_l2(f.sample(e, j), f.sample(e, j + 1), g.sample(e, j), g.sample(e, j + 1), h);
    total += topo.edge_weight(e) * acc;
  }
  return total;
}

Complex h1_semi_inner(const TreeFunction& f, const TreeFunction& g) {
  if (f.tree() != g.tree() || f.samples_per_edge() != g.samples_per_edge())
    throw std::invalid_argument("h1_semi_inner: incompatible operands");
  const auto& topo = *f.tree();
  const int m = f.samples_per_edge();
  Complex total(0.0, 0.0);
  for (std::int64_t i = 0; i < topo.edge_count(); ++i) {
    const EdgeId e = topo.edge_at(i);
    const double h = topo.edge_length(e) / double(m - 1);
    Complex acc(0.0, 0.0);
    for (int j = 0; j + 1 < m; ++j) {
      const Complex du = f.sample(e, j + 1) - f.sample(e, j);
      const Complex dv = g.sample(e, j + 1) - g.sample(e, j);
      acc += du * std::conj(dv) / h;
    }
    total += topo.edge_weight(e) * acc;
  }
  return total;
}

NormReport norms(const TreeFunction& f) {
  NormReport r;
  r.l2 = std::sqrt(std::abs(l2_inner(f, f)));
  r.h1_semi = std::sqrt(std::abs(h1_semi_inner(f, f)));
  r.h1 = std::sqrt(r.l2 * r.l2 + r.h1_semi * r.h1_semi);
  const bool rooted = std::abs(f.root_value()) <= 1e-14;
  r.poincare_ratio =
      (rooted && r.h1_semi > 0.0) ? r.l2 / r.h1_semi : std::nan("");
  return r;
}

std::vector<Complex> vertex_values(const TreeFunction& f, int N) {
  const auto& topo = *f.tree();
  if (N < 0 || N > topo.depth())
    throw std::out_of_range("vertex_values: generation exceeds tree depth");
  std::vector<Complex> out(static_cast<std::size_t>(topo.edges_at(N)));
  for (std::int64_t k = 0; k < topo.edges_at(N); ++k)
    out[std::size_t(k)] = f.vertex_value({N, k});
  return out;
}

TreeFunction extend_by_constants(const TreeFunction& f, int N) {
  const auto& topo = *f.tree();
  if (N < 0 || N > topo.depth())
    throw std::out_of_range("extend_by_constants: generation exceeds tree depth");
  TreeFunction out = f;
  const int m = f.samples_per_edge();
  for (std::int64_t i = 0; i < topo.edge_count(); ++i) {
    const EdgeId e = topo.edge_at(i);
    if (e.n <= N) continue;
    std::int64_t k = e.k;
    for (int n = e.n; n > N; --n) k /= topo.p();
    const Complex v = f.vertex_value({N, k});
    for (int j = 0; j < m; ++j)
      out.mutable_data()[out.index(e, j)] = v;
  }
  return out;
}

double cutoff_profile(double t) {
  if (t <= 0.5) return 0.0;
  if (t >= 0.75) return 1.0;
  const double s = (t - 0.5) / 0.25;
  return s * s * (3.0 - 2.0 * s);
}

TreeFunction root_cutoff(const TreeFunction& f) {
  const auto& topo = *f.tree();
  TreeFunction out = f;
  const int m = f.samples_per_edge();
  for (std::int64_t i = 0; i < topo.edge_count(); ++i) {
    const EdgeId e = topo.edge_at(i);
    const auto [a, b] = topo.edge_interval(e);
    if (a >= 0.75) continue;
    for (int j = 0; j < m; ++j) {
      const double t = a + (b - a) * double(j) / double(m - 1);
      out.mutable_data()[out.index(e, j)] *= cutoff_profile(t);
    }
  }
  return out;
}

std::optional<int> compact_support_generation(const TreeFunction& f, double tolerance) {
  const auto& topo = *f.tree();
  const int m = f.samples_per_edge();
  int deepest = -1;  // deepest generation holding a sample above tolerance
  for (std::int64_t i = 0; i < topo.edge_count(); ++i) {
    const EdgeId e = topo.edge_at(i);
    for (int j = 0; j < m; ++j)
      if (std::abs(f.sample(e, j)) > tolerance) {
        deepest = std::max(deepest, e.n);
        break;
      }
  }
  if (deepest == topo.depth()) return std::nullopt;
  return std::max(deepest, 0);
}

namespace {

void check_transport_pair(const TreeTopology& pert, const TreeTopology& geom) {
  if (pert.kind() != TreeKind::perturbed || geom.kind() != TreeKind::geometric)
    throw std::invalid_argument("transport: expected one perturbed and one geometric tree");
  if (pert.p() != geom.p() || pert.depth() != geom.depth() ||
      pert.params().ell != geom.params().ell || pert.params().alpha != geom.params().alpha)
    throw std::invalid_argument("transport: trees do not share (p, ell, alpha, depth)");
}

}  // namespace

TreeFunction transport_to_geometric(const TreeFunction& f, TreeFunction::Tree geometric) {
  check_transport_pair(*f.tree(), *geometric);
  // phi is affine per edge and maps the uniform grid of the geometric edge
  // onto the uniform grid of the perturbed edge, so g = f o phi has the
  // same samples attached to the other topology.
  TreeFunction g(std::move(geometric), f.samples_per_edge());
  g.mutable_data() = f.data();
  return g;
}

TreeFunction transport_from_geometric(const TreeFunction& g, TreeFunction::Tree perturbed) {
  check_transport_pair(*perturbed, *g.tree());
  TreeFunction f(std::move(perturbed), g.samples_per_edge());
  f.mutable_data() = g.data();
  return f;
}

}  // namespace treetrace
