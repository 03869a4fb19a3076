#include <doctest.h>

#include "test_helpers.hpp"
#include "treetrace/io.hpp"
#include "treetrace/rng.hpp"
#include "treetrace/trace.hpp"

using namespace treetrace;
using treetrace::testing::fit_slope;
using treetrace::testing::geom;
using treetrace::testing::interval;

namespace {

TraceCoefficients random_coeffs(const TreeParams& params, int max_nu, std::uint64_t seed) {
  SplitMix64 rng = substream(seed, 3);
  TraceCoefficients c;
  c.params = params;
  for (const auto& z : symmetry_indices(params.p, max_nu))
    c.entries[z] = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
  return c;
}

}  // namespace

TEST_CASE("tau on harmonic basis functions") {
  const int depth = 10;
  const auto tree = geom(2, 0.5, 0.5, depth);
  const TreeParams& params = tree->params();
  const double x = params.ell / (params.alpha * params.p);

  SUBCASE("phi_rad maps to its boundary limit") {
    const TreeFunction f = harmonic_basis_function(SymmetryIndex::rad(), tree, 2);
    const TraceCoefficients t = tau(f);
    const double limit = F_infty(params, SymmetryIndex::rad());
    // truncation alone: the stored tree sees F_rad(t_depth)
    CHECK(std::abs(t.at(SymmetryIndex::rad()) - limit) <=
          limit * std::pow(x, depth + 1) * 1.01);
    for (const auto& [z, a] : t.entries)
      if (!z.is_rad()) CHECK(std::abs(a) == 0.0);  // exact branch cancellation
  }
  SUBCASE("phi_{(0,0,1)} maps to p^{-nu/2} F_infty e_z") {
    const SymmetryIndex z0 = SymmetryIndex::triple(0, 0, 1);
    const TreeFunction f = harmonic_basis_function(z0, tree, 2);
    const TraceCoefficients t = tau(f);
    const double expected = trace_multiplier(params, z0);  // = 1 at these parameters
    CHECK(expected == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(t.at(z0) - expected) <= expected * std::pow(x, depth) * 1.01);
    CHECK(std::abs(t.at(SymmetryIndex::rad())) == 0.0);
    CHECK(std::abs(t.at(SymmetryIndex::triple(1, 0, 1))) == 0.0);
  }
  SUBCASE("gate violation raises a regime error") {
    const auto bad = geom(2, 0.5, 0.2, 3);
    CHECK_THROWS_AS(tau(TreeFunction::constant(bad, 2, 1.0)), std::domain_error);
  }
}

TEST_CASE("tau kernel: compact support telescopes to exact zeros") {
  for (int p : {2, 3}) {
    const auto tree = geom(p, 0.5, 1.2 / p, 7);
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
      const TreeFunction f = random_compactly_supported(tree, 3, 3, seed);
      CHECK(std::abs(f.root_value()) == 0.0);
      const TraceCoefficients t = tau(f);
      for (const auto& [z, a] : t.entries) CHECK(std::abs(a) < 1e-12);
    }
  }
}

TEST_CASE("tau linearity") {
  const auto tree = geom(2, 0.5, 0.5, 6);
  const TreeFunction f = random_tree_function(tree, 3, 5);
  const TreeFunction g = random_tree_function(tree, 3, 6);
  const Complex a(0.3, -0.9), b(-1.1, 0.2);
  TreeFunction combo = a * f;
  combo += b * g;
  TraceCoefficients expect = tau(f);
  expect *= a;
  TraceCoefficients tg = tau(g);
  tg *= b;
  expect += tg;
  const TraceCoefficients got = tau(combo);
  for (const auto& [z, v] : got.entries) CHECK(std::abs(v - expect.at(z)) < 1e-10);
}

TEST_CASE("tau_vertex is tau of the constant extension") {
  const auto tree = geom(2, 0.5, 0.5, 9);
  const TreeParams& params = tree->params();
  SUBCASE("fixed point at the support level") {
    const TreeFunction g = random_compactly_supported(tree, 3, 2, 11);
    const TreeFunction gN = extend_by_constants(g, 4);
    const TraceCoefficients a = tau_vertex(gN, 4), b = tau(gN);
    for (const auto& [z, v] : b.entries) CHECK(std::abs(v - a.at(z)) == 0.0);
  }
  SUBCASE("geometric convergence for phi_rad") {
    const TreeFunction f = harmonic_basis_function(SymmetryIndex::rad(), tree, 2);
    const TraceCoefficients full = tau(f);
    const double sigma = params.sigma();
    std::vector<double> ns, logerr;
    for (int N = 2; N <= 6; ++N) {
      TraceCoefficients diff = tau_vertex(f, N);
      diff *= Complex(-1.0, 0.0);
      diff += full;
      ns.push_back(double(N));
      logerr.push_back(std::log(diff.l2r_norm(sigma)));
    }
    const double rate = std::exp(fit_slope(ns, logerr));
    const double x = params.ell / (params.alpha * params.p);
    CHECK(std::abs(std::log(rate) - std::log(x)) < 0.1 * std::abs(std::log(x)));
  }
  SUBCASE("zero input") {
    const TraceCoefficients t = tau_vertex(TreeFunction(tree, 2), 3);
    for (const auto& [z, a] : t.entries) CHECK(std::abs(a) == 0.0);
  }
}

TEST_CASE("identification operator") {
  const TreeParams params{2, 0.5, 0.5};
  const auto dec = interval(2, 8);
  SUBCASE("basis images") {
    TraceCoefficients rad;
    rad.params = params;
    rad.entries[SymmetryIndex::rad()] = Complex(1.0, 0.0);
    const PiecewiseConstantFn one = identify(rad, dec, 2);
    for (const auto& v : one.values) CHECK(v == Complex(1.0, 0.0));

    TraceCoefficients haar;
    haar.params = params;
    haar.entries[SymmetryIndex::triple(0, 0, 1)] = Complex(1.0, 0.0);
    const PiecewiseConstantFn mother = identify(haar, dec, 1);
    CHECK(mother.values[0] == Complex(1.0, 0.0));
    CHECK(mother.values[1] == Complex(-1.0, 0.0));
  }
  SUBCASE("insufficient depth is rejected") {
    TraceCoefficients deep;
    deep.params = params;
    deep.entries[SymmetryIndex::triple(5, 0, 1)] = Complex(1.0, 0.0);
    CHECK_THROWS_AS(identify(deep, interval(2, 3), -1), std::invalid_argument);
  }
  SUBCASE("Prop-style isometry on random coefficient sets") {
    for (const double r : {0.5, 0.3}) {
      for (std::uint64_t seed : {7ULL, 8ULL, 9ULL}) {
        const TraceCoefficients c = random_coeffs(params, 3, seed);
        const PiecewiseConstantFn f = identify(c, dec, -1);
        const double lhs2 = std::pow(approx_norm(f, r).a_r_viaQ, 2);
        const double rhs2 = std::pow(2.0, 2.0 * r) * 1.0 * std::pow(c.l2r_norm(r), 2);
        CHECK(lhs2 == doctest::Approx(rhs2).epsilon(1e-10));
      }
    }
  }
  SUBCASE("identify_inverse inverts identify") {
    const TraceCoefficients c = random_coeffs(params, 2, 12);
    const PiecewiseConstantFn f = identify(c, dec, 3);
    const TraceCoefficients back = identify_inverse(f, params);
    for (const auto& [z, a] : c.entries) CHECK(std::abs(back.at(z) - a) < 1e-13);
  }
}

TEST_CASE("embedded trace: two methods agree at the geometric rate") {
  const int depth = 12;
  const auto tree = geom(2, 0.5, 0.5, depth);
  const auto dec = interval(2, depth);
  TreeFunction f = harmonic_basis_function(SymmetryIndex::rad(), tree, 2);
  f += Complex(0.7, 0.0) *
       harmonic_basis_function(SymmetryIndex::triple(0, 0, 1), tree, 2);

  std::vector<double> ns, logerr;
  for (int N = 3; N <= 9; ++N) {
    const EmbeddedTrace g = gamma(f, dec, N);
    CHECK(g.method_b.level == N);
    ns.push_back(double(N));
    logerr.push_back(std::log(g.discrepancy_l2));
  }
  for (std::size_t i = 1; i < logerr.size(); ++i) CHECK(logerr[i] < logerr[i - 1]);
  const double fitted = std::exp(fit_slope(ns, logerr));
  CHECK(std::abs(fitted - 0.5) < 0.05);  // ell/(alpha p) = 0.5

  SUBCASE("kernel members trace to zero") {
    const TreeFunction h = random_compactly_supported(tree, 2, 3, 4);
    const EmbeddedTrace g = gamma(h, dec, 6);
    CHECK(g.method_a.l2_norm() < 1e-12);
    CHECK(g.method_b.l2_norm() < 1e-12);  // N beyond the support generation
  }
}

TEST_CASE("lift is a right inverse") {
  const int depth = 6;
  const auto tree = geom(2, 0.5, 0.5, depth);
  const auto dec = interval(2, depth);
  SUBCASE("constant lifts through the radial direction") {
    PiecewiseConstantFn one = PiecewiseConstantFn::zero(dec, 0);
    one.values[0] = Complex(1.0, 0.0);
    const TreeFunction f = lift(one, tree, 2);
    // radial: values at a generation depend only on the generation
    CHECK(std::abs(f.sample({1, 0}, 1) - f.sample({1, 1}, 1)) < 1e-14);
    const EmbeddedTrace g = gamma(f, dec, 3);
    CHECK(pcf_distance(g.method_a, one) < 1e-12);
  }
  SUBCASE("Haar mother lifts into the first character sector") {
    PiecewiseConstantFn mother = PiecewiseConstantFn::zero(dec, 1);
    mother.values = {Complex(1, 0), Complex(-1, 0)};
    const TreeFunction f = lift(mother, tree, 2);
    // proportional to phi_{(0,0,1)}: zero radial average everywhere
    for (int gen = 1; gen <= depth; ++gen) {
      Complex acc(0, 0);
      for (std::int64_t k = 0; k < tree->edges_at(gen); ++k) acc += f.sample({gen, k}, 1);
      CHECK(std::abs(acc) < 1e-13);
    }
    const EmbeddedTrace emb = gamma(f, dec, 4);
    CHECK(pcf_distance(emb.method_a, mother) < 1e-12);
  }
  SUBCASE("random level-3 round trips") {
    SplitMix64 rng(31);
    for (int trial = 0; trial < 5; ++trial) {
      PiecewiseConstantFn g = PiecewiseConstantFn::zero(dec, 3);
      for (auto& v : g.values) v = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
      const TreeFunction f = lift(g, tree, 2);
      const EmbeddedTrace back = gamma(f, dec, 3);
      CHECK(pcf_distance(back.method_a, g) < 1e-10);
      // the vertex route only converges to g as N grows
      CHECK(pcf_distance(gamma(f, dec, 6).method_b, g) <
            pcf_distance(back.method_b, g));
    }
  }
}

TEST_CASE("perturbed trace transports through the coordinate change") {
  const TreeParams params{2, 0.5, 0.5};
  const int depth = 6, m = 4;
  SUBCASE("c = 1 reproduces the geometric trace") {
    auto trivial = std::make_shared<const TreeTopology>(
        TreeTopology::perturbed(params, depth, {}, {}));
    auto geo = geom(2, 0.5, 0.5, depth);
    const TreeFunction g = random_tree_function(geo, m, 17);
    TreeFunction f(trivial, m);
    f.mutable_data() = g.data();
    const TraceCoefficients a = tau_perturbed(f), b = tau(g);
    for (const auto& [z, v] : a.entries) CHECK(std::abs(v - b.at(z)) == 0.0);
  }
  SUBCASE("vertex values are fixed by the coordinate change") {
    SplitMix64 rng(41);
    std::map<EdgeId, double> lengths;
    const auto base = TreeTopology::geometric(params, depth);
    for (std::int64_t i = 0; i < base.edge_count(); ++i) {
      const EdgeId e = base.edge_at(i);
      lengths[e] = base.edge_length(e) * (0.9 + 0.2 * rng.uniform());
    }
    auto pert = std::make_shared<const TreeTopology>(
        TreeTopology::perturbed(params, depth, lengths, {}));
    auto geo = geom(2, 0.5, 0.5, depth);
    TreeFunction f(pert, m);
    f.mutable_data() = random_tree_function(geo, m, 19).data();
    const TreeFunction g = transport_to_geometric(f, geo);
    for (int N : {2, 4}) {
      const auto vf = vertex_values(f, N);
      const auto vg = vertex_values(g, N);
      for (std::size_t i = 0; i < vf.size(); ++i) CHECK(vf[i] == vg[i]);
    }
    // kernel invariance under the transport
    const TreeFunction h0 = random_compactly_supported(geo, m, 3, 23);
    TreeFunction h(pert, m);
    h.mutable_data() = h0.data();
    const TraceCoefficients t = tau_perturbed(h);
    for (const auto& [z, a] : t.entries) CHECK(std::abs(a) < 1e-12);
  }
}

TEST_CASE("trace coefficients JSON round trip") {
  const TreeParams params{2, 0.5, 0.5};
  TraceCoefficients c = random_coeffs(params, 2, 3);
  const json j = trace_to_json(c);
  const TraceCoefficients back = trace_from_json(j);
  for (const auto& [z, a] : c.entries) CHECK(std::abs(back.at(z) - a) == 0.0);
  CHECK(j[0]["z"] == "rad");
}
