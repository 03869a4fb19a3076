#include <doctest.h>

#include "test_helpers.hpp"
#include "treetrace/io.hpp"
#include "treetrace/rng.hpp"
#include "treetrace/tree.hpp"

using namespace treetrace;

TEST_CASE("geometric tree grid and height") {
  const auto tree = TreeTopology::geometric({2, 0.5, 0.5}, 2);
  CHECK(tree.t(0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(tree.t(1) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(tree.t(2) == doctest::Approx(1.75).epsilon(1e-15));
  CHECK(tree.height() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(tree.t(-1) == 0.0);
  CHECK(tree.edge_count() == 7);

  const auto tall = TreeTopology::geometric({3, 0.9, 1.0}, 0);
  CHECK(tall.t(0) == doctest::Approx(1.0));
  CHECK(tall.height() == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("parameter domain errors") {
  CHECK_THROWS_AS(TreeTopology::geometric({2, 1.0, 0.5}, 2), std::invalid_argument);
  CHECK_THROWS_AS(TreeTopology::geometric({1, 0.5, 0.5}, 2), std::invalid_argument);
  CHECK_THROWS_AS(TreeTopology::geometric({2, 0.5, -1.0}, 2), std::invalid_argument);
  CHECK_THROWS_AS(TreeTopology::geometric({2, 0.5, 0.5}, -1), std::invalid_argument);
}

TEST_CASE("children and parent conventions") {
  CHECK(children({1, 1}, 2) == std::vector<EdgeId>{{2, 2}, {2, 3}});
  CHECK(*parent({2, 3}, 2) == EdgeId{1, 1});
  CHECK(children({1, 2}, 3) == std::vector<EdgeId>{{2, 6}, {2, 7}, {2, 8}});
  CHECK_FALSE(parent({0, 0}, 2).has_value());

  // round trip parent(children(e)[j]) = e over a couple of generations
  for (int p : {2, 3}) {
    for (int n = 0; n < 3; ++n)
      for (std::int64_t k = 0; k < std::int64_t(std::pow(p, n)); ++k)
        for (const EdgeId c : children({n, k}, p)) CHECK(*parent(c, p) == EdgeId{n, k});
  }
}

TEST_CASE("subtree membership and branch classification") {
  CHECK(subtree_contains({1, 0}, {3, 1}, 2));
  CHECK(*subtree_branch({1, 0}, {3, 1}, 2) == 0);  // chain (3,1)->(2,0)->(1,0)
  CHECK_FALSE(subtree_contains({1, 1}, {3, 1}, 2));
  CHECK(subtree_contains({0, 0}, {0, 0}, 2));
  CHECK_FALSE(subtree_branch({0, 0}, {0, 0}, 2).has_value());
}

TEST_CASE("generation counts and measure totals") {
  const auto tree = TreeTopology::geometric({3, 0.4, 0.7}, 4);
  for (int n = 0; n <= 4; ++n) CHECK(tree.edges_at(n) == std::int64_t(std::pow(3, n)));
  // sum over generation n of weight*length = (p alpha ell)^n
  double expected = 0.0, term = 1.0;
  for (int n = 0; n <= 4; ++n) {
    expected += term;
    term *= 3 * 0.7 * 0.4;
  }
  CHECK(tree.total_measure() == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("perturbed tree distortion") {
  const TreeParams params{2, 0.5, 0.5};
  SUBCASE("geometric data gives c = 1") {
    const auto tree = TreeTopology::perturbed(params, 3, {}, {});
    CHECK(tree.distortion() == 1.0);
  }
  SUBCASE("single stretched edge") {
    const auto tree = TreeTopology::perturbed(params, 3, {{{1, 0}, 1.2 * 0.5}}, {});
    CHECK(tree.distortion() == doctest::Approx(1.2).epsilon(1e-12));
    CHECK(tree.edge_length({1, 0}) == doctest::Approx(0.6));
    CHECK(tree.edge_length({1, 1}) == doctest::Approx(0.5));
    // cumulative distances follow the root path
    CHECK(tree.vertex_coordinate({1, 0}) == doctest::Approx(1.6));
    CHECK(tree.vertex_coordinate({2, 1}) == doctest::Approx(1.6 + 0.25));
  }
  SUBCASE("nonpositive data rejected") {
    CHECK_THROWS_AS(TreeTopology::perturbed(params, 3, {{{1, 0}, 0.0}}, {}),
                    std::invalid_argument);
  }
}

TEST_CASE("coordinate change is affine and endpoint-preserving") {
  const TreeParams params{2, 0.5, 0.5};
  const auto pert = TreeTopology::perturbed(params, 3, {{{1, 0}, 0.6}}, {});
  // midpoint of the geometric edge (1,0) = 1.25 maps to the midpoint 1.3
  const TreePoint mapped = map_to_perturbed(pert, {{1, 0}, 1.25});
  CHECK(mapped.t == doctest::Approx(1.3).epsilon(1e-14));
  // left endpoint t_0 = 1 maps to L_{1,0} - l_{1,0} = 1
  CHECK(map_to_perturbed(pert, {{1, 0}, 1.0}).t == doctest::Approx(1.0));
  CHECK(map_to_perturbed(pert, {{1, 0}, 1.5}).t == doctest::Approx(1.6));

  CHECK_THROWS(map_to_perturbed(pert, {{1, 0}, 0.2}));

  // round trip on random points
  SplitMix64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = int(rng.next() % 4);
    const std::int64_t k = std::int64_t(rng.next() % (std::uint64_t(1) << n));
    const auto geo = TreeTopology::geometric(params, 3);
    const auto [a, b] = geo.edge_interval({n, k});
    const TreePoint x{{n, k}, a + (b - a) * rng.uniform()};
    const TreePoint back = map_to_geometric(pert, map_to_perturbed(pert, x));
    CHECK(back.t == doctest::Approx(x.t).epsilon(1e-12));
  }
}

TEST_CASE("tree JSON round trip") {
  const TreeParams params{2, 0.5, 0.5};
  const auto tree =
      TreeTopology::perturbed(params, 8, {{{1, 0}, 0.6}}, {{{1, 0}, 0.55}});
  const json j = tree_to_json(tree);
  CHECK(j["p"] == 2);
  CHECK(j["perturbations"].size() == 1);
  const TreeTopology back = tree_from_json(j);
  CHECK(back.kind() == TreeKind::perturbed);
  CHECK(back.edge_length({1, 0}) == doctest::Approx(0.6));
  CHECK(back.edge_weight({1, 0}) == doctest::Approx(0.55));
  CHECK(back.distortion() == doctest::Approx(tree.distortion()));

  const json schema = json::parse(
      R"({"p":2,"ell":0.5,"alpha":0.5,"depth":8,
          "perturbations":[{"n":1,"k":0,"length":0.6,"weight":0.55}]})");
  const TreeTopology parsed = tree_from_json(schema);
  CHECK(parsed.depth() == 8);
  CHECK(parsed.edge_length({1, 0}) == doctest::Approx(0.6));
}
