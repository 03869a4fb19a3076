#include <doctest.h>

#include <fstream>
#include <limits>

#include "test_helpers.hpp"
#include "treetrace/io.hpp"
#include "treetrace/rng.hpp"

using namespace treetrace;
using treetrace::testing::fit_slope;
using treetrace::testing::geom;

TEST_CASE("norms of simple functions") {
  SUBCASE("constant one on the depth-1 dyadic tree") {
    // l2^2 = 1*1 + 2*0.5*0.5 = 1.5, the partial sum of (p alpha ell)^n
    const auto f = TreeFunction::constant(geom(2, 0.5, 0.5, 1), 4, 1.0);
    const NormReport r = norms(f);
    CHECK(r.l2 * r.l2 == doctest::Approx(1.5).epsilon(1e-14));
    CHECK(r.h1_semi == 0.0);
    CHECK(r.h1 == doctest::Approx(r.l2));
  }
  SUBCASE("zero function") {
    const auto f = TreeFunction(geom(2, 0.5, 0.5, 3), 3);
    const NormReport r = norms(f);
    CHECK(r.l2 == 0.0);
    CHECK(r.h1 == 0.0);
  }
  SUBCASE("f(x) = |x| on the single unit edge") {
    const auto f = TreeFunction::radial(geom(2, 0.5, 0.5, 0), 5,
                                        [](double t) { return Complex(t, 0.0); });
    const NormReport r = norms(f);
    CHECK(r.l2 * r.l2 == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(r.h1_semi * r.h1_semi == doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("h1 identity and homogeneity on random data") {
    const auto tree = geom(2, 0.5, 0.5, 4);
    const TreeFunction f = random_tree_function(tree, 4, 11);
    const NormReport r = norms(f);
    CHECK(r.h1 * r.h1 ==
          doctest::Approx(r.l2 * r.l2 + r.h1_semi * r.h1_semi).epsilon(1e-12));
    const Complex c(0.3, -1.7);
    const NormReport rc = norms(c * f);
    CHECK(rc.l2 == doctest::Approx(std::abs(c) * r.l2).epsilon(1e-12));
    CHECK(rc.h1_semi == doctest::Approx(std::abs(c) * r.h1_semi).epsilon(1e-12));
  }
}

TEST_CASE("continuity validation") {
  const auto tree = geom(2, 0.5, 0.5, 1);
  std::vector<std::vector<Complex>> table(3, std::vector<Complex>(2, Complex(1.0, 0.0)));
  CHECK_NOTHROW(TreeFunction::from_samples(tree, 2, table));
  table[1][0] = Complex(1.0 + 1e-9, 0.0);  // first sample of edge (1,0)
  CHECK_THROWS_AS(TreeFunction::from_samples(tree, 2, table), std::invalid_argument);
}

TEST_CASE("vertex values") {
  const auto tree = geom(2, 0.5, 0.5, 3);
  const auto f = TreeFunction::constant(tree, 3, 1.0);
  const auto v = vertex_values(f, 3);
  REQUIRE(v.size() == 8);
  for (const auto& x : v) CHECK(x == Complex(1.0, 0.0));
  CHECK_THROWS_AS(vertex_values(f, 4), std::out_of_range);
}

TEST_CASE("extension by constants") {
  const auto tree = geom(2, 0.5, 0.5, 5);
  SUBCASE("constants are fixed points") {
    const auto f = TreeFunction::constant(tree, 3, Complex(0.3, 0.4));
    for (int N : {0, 2, 5}) {
      const TreeFunction fN = extend_by_constants(f, N);
      for (std::size_t i = 0; i < fN.data().size(); ++i)
        CHECK(fN.data()[i] == f.data()[i]);
    }
  }
  SUBCASE("derivative never grows and convergence is monotone") {
    const TreeFunction f = random_tree_function(tree, 4, 3, 0.7);
    const double full = norms(f).h1_semi;
    double prev_err = std::numeric_limits<double>::infinity();
    for (int N = 0; N <= 5; ++N) {
      const TreeFunction fN = extend_by_constants(f, N);
      CHECK(norms(fN).h1_semi <= full + 1e-12);
      TreeFunction diff = f;
      diff += Complex(-1.0, 0.0) * fN;
      const double err = norms(diff).h1;
      CHECK(err <= prev_err + 1e-12);
      prev_err = err;
    }
    CHECK(prev_err == doctest::Approx(0.0));  // f_depth = f
  }
}

TEST_CASE("root cutoff") {
  const auto tree = geom(2, 0.5, 0.5, 3);
  SUBCASE("profile endpoints") {
    CHECK(cutoff_profile(0.4) == 0.0);
    CHECK(cutoff_profile(0.5) == 0.0);
    CHECK(cutoff_profile(0.75) == 1.0);
    CHECK(cutoff_profile(0.625) == doctest::Approx(0.5));
  }
  SUBCASE("constant becomes rooted") {
    const auto f = TreeFunction::constant(tree, 9, 1.0);
    const TreeFunction g = root_cutoff(f);
    CHECK(g.root_value() == Complex(0.0, 0.0));
    for (std::int64_t i = 1; i < tree->edge_count(); ++i) {
      const EdgeId e = tree->edge_at(i);
      for (int q = 0; q < 9; ++q) CHECK(g.sample(e, q) == Complex(1.0, 0.0));
    }
  }
  SUBCASE("identity away from the root edge") {
    // supported outside T^0: zero on the root edge and at its endpoint
    TreeFunction g = random_compactly_supported(tree, 5, 2, 19);
    auto& data = g.mutable_data();
    for (int q = 0; q < 5; ++q) data[g.index({0, 0}, q)] = Complex(0.0, 0.0);
    data[g.index({1, 0}, 0)] = Complex(0.0, 0.0);
    data[g.index({1, 1}, 0)] = Complex(0.0, 0.0);
    const TreeFunction cut = root_cutoff(g);
    for (std::size_t i = 0; i < cut.data().size(); ++i)
      CHECK(cut.data()[i] == g.data()[i]);
  }
  SUBCASE("norm bound with the profile constant") {
    // ||f~||_H1 <= sqrt(2b+1) ||f||_H1, b = max(||phi||_inf^2, ||phi'||_inf^2) = 36
    const double bound = std::sqrt(2.0 * 36.0 + 1.0);
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL}) {
      const TreeFunction f = random_tree_function(geom(2, 0.5, 0.5, 3), 33, seed);
      CHECK(norms(root_cutoff(f)).h1 <= bound * norms(f).h1);
    }
  }
}

TEST_CASE("refinement consistency: norms converge at second order") {
  const auto make = [&](int m) {
    return TreeFunction::radial(geom(2, 0.5, 0.5, 4), m, [](double t) {
      return Complex(std::sin(3.0 * t) * std::exp(-t), std::cos(2.0 * t));
    });
  };
  std::vector<double> log_m, log_dl2, log_dh1;
  double prev_l2 = 0.0, prev_h1 = 0.0;
  for (int m : {5, 9, 17, 33, 65}) {
    const NormReport r = norms(make(m));
    if (!log_m.empty()) {
      log_dl2.push_back(std::log(std::abs(r.l2 - prev_l2)));
      log_dh1.push_back(std::log(std::abs(r.h1_semi - prev_h1)));
      log_m.back() = std::log(double(m));  // difference indexed by the finer m
    }
    prev_l2 = r.l2;
    prev_h1 = r.h1_semi;
    log_m.push_back(std::log(double(m)));
  }
  log_m.pop_back();
  CHECK(-fit_slope(log_m, log_dl2) >= 1.9);
  CHECK(-fit_slope(log_m, log_dh1) >= 1.9);
}

TEST_CASE("compact support detection") {
  const auto tree = geom(2, 0.5, 0.5, 5);
  SUBCASE("bump on edge (1,0)") {
    TreeFunction f(tree, 4);
    auto& data = f.mutable_data();
    data[f.index({1, 0}, 1)] = Complex(0.5, 0.0);
    data[f.index({1, 0}, 2)] = Complex(0.5, 0.0);
    CHECK(*compact_support_generation(f, 1e-14) == 1);
  }
  SUBCASE("constant has no compact support") {
    const auto f = TreeFunction::constant(tree, 4, 1.0);
    CHECK_FALSE(compact_support_generation(f, 1e-14).has_value());
  }
  SUBCASE("extension beyond vanishing vertex values") {
    const TreeFunction g = random_compactly_supported(tree, 4, 3, 5);
    CHECK(*compact_support_generation(g, 1e-14) == 3);
    const TreeFunction gN = extend_by_constants(g, 3);
    CHECK(*compact_support_generation(gN, 1e-14) == 3);
  }
}

TEST_CASE("transport between perturbed and geometric trees") {
  const TreeParams params{2, 0.5, 0.5};
  const int depth = 6, m = 6;
  SplitMix64 rng(23);
  std::map<EdgeId, double> lengths, weights;
  const auto base = TreeTopology::geometric(params, depth);
  for (std::int64_t i = 0; i < base.edge_count(); ++i) {
    const EdgeId e = base.edge_at(i);
    const double fl = 1.0 / 1.2 + (1.2 - 1.0 / 1.2) * rng.uniform();
    const double fw = 1.0 / 1.2 + (1.2 - 1.0 / 1.2) * rng.uniform();
    lengths[e] = fl * base.edge_length(e);
    weights[e] = fw * base.edge_weight(e);
  }
  auto pert = std::make_shared<const TreeTopology>(
      TreeTopology::perturbed(params, depth, lengths, weights));
  auto geo = std::make_shared<const TreeTopology>(TreeTopology::geometric(params, depth));
  const double c = pert->distortion();
  CHECK(c <= 1.2 + 1e-12);

  TreeFunction f(pert, m);
  f.mutable_data() = random_tree_function(geo, m, 99).data();

  const TreeFunction g = transport_to_geometric(f, geo);
  const NormReport rf = norms(f), rg = norms(g);
  // c^-2 ||g||^2_{L2(T)} <= ||f||^2_{L2(cT)} <= c^2 ||g||^2_{L2(T)}
  const double l2_ratio = (rf.l2 * rf.l2) / (rg.l2 * rg.l2);
  CHECK(l2_ratio >= 1.0 / (c * c) - 1e-12);
  CHECK(l2_ratio <= c * c + 1e-12);
  const double h1_ratio = (rf.h1_semi * rf.h1_semi) / (rg.h1_semi * rg.h1_semi);
  CHECK(h1_ratio >= 1.0 / (c * c * c * c) - 1e-12);
  CHECK(h1_ratio <= c * c * c * c + 1e-12);

  // exact round trip
  const TreeFunction back = transport_from_geometric(g, pert);
  for (std::size_t i = 0; i < back.data().size(); ++i) CHECK(back.data()[i] == f.data()[i]);

  // c = 1 means equal norms
  auto trivial = std::make_shared<const TreeTopology>(TreeTopology::perturbed(params, 3, {}, {}));
  const TreeFunction h = random_tree_function(geom(2, 0.5, 0.5, 3), 4, 5);
  TreeFunction h_pert(trivial, 4);
  h_pert.mutable_data() = h.data();
  CHECK(norms(h_pert).l2 ==
        doctest::Approx(norms(h).l2).epsilon(1e-10));
}

TEST_CASE("tree function JSON round trip and vertex CSV") {
  const auto tree = geom(2, 0.5, 0.5, 2);
  const TreeFunction f = random_tree_function(tree, 3, 17);
  const TreeFunction back = tree_function_from_json(tree_function_to_json(f));
  for (std::size_t i = 0; i < f.data().size(); ++i)
    CHECK(back.data()[i] == f.data()[i]);
  write_vertex_values_csv("vertex_values_test.csv", f, 2);
  std::ifstream in("vertex_values_test.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "N,K,re,im");
}
