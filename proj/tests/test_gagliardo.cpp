#include <doctest.h>

#include "oracles.hpp"
#include "test_helpers.hpp"
#include "treetrace/gagliardo.hpp"
#include "treetrace/rng.hpp"

using namespace treetrace;
using treetrace::testing::half_square_gagliardo_oracle;
using treetrace::testing::interval;
using treetrace::testing::interval_pair_kernel_oracle;
using treetrace::testing::square;

TEST_CASE("analytic anchor: half indicator at s = 1/4") {
  PiecewiseConstantFn f = PiecewiseConstantFn::zero(interval(2, 4), 1);
  f.values = {Complex(1, 0), Complex(0, 0)};
  const GagliardoResult g = gagliardo_seminorm(f, 0.25);
  const double expected = 4.0 * (std::sqrt(2.0) - 1.0);  // 1.6568542...
  CHECK(g.seminorm2 == doctest::Approx(expected).epsilon(1e-10));
  CHECK_FALSE(g.divergent);
  // representing the same function on a finer level must not change it
  CHECK(gagliardo_seminorm(f.at_level(4), 0.25).seminorm2 ==
        doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("constants and homogeneity") {
  const auto dec = interval(2, 6);
  PiecewiseConstantFn c = PiecewiseConstantFn::zero(dec, 3);
  for (auto& v : c.values) v = Complex(0.4, 1.1);
  CHECK(gagliardo_seminorm(c, 0.25).seminorm == 0.0);

  SplitMix64 rng(3);
  PiecewiseConstantFn f = PiecewiseConstantFn::zero(dec, 4);
  for (auto& v : f.values) v = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
  const double base = gagliardo_seminorm(f, 0.3).seminorm;
  const Complex scale(1.2, -0.7);
  PiecewiseConstantFn g = f;
  for (auto& v : g.values) v *= scale;
  CHECK(gagliardo_seminorm(g, 0.3).seminorm ==
        doctest::Approx(std::abs(scale) * base).epsilon(1e-12));
}

TEST_CASE("exact pairwise formula agrees with the quadrature oracle") {
  const auto dec = interval(2, 3);
  SplitMix64 rng(17);
  for (const double s : {0.15, 0.25, 0.4}) {
    PiecewiseConstantFn f = PiecewiseConstantFn::zero(dec, 3);
    for (auto& v : f.values) v = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
    const double w = 1.0 / 8.0;
    double oracle = 0.0;
    for (int a = 0; a < 8; ++a)
      for (int b = a + 1; b < 8; ++b)
        oracle += std::norm(f.values[std::size_t(a)] - f.values[std::size_t(b)]) *
                  interval_pair_kernel_oracle(a * w, (a + 1) * w, b * w, (b + 1) * w, s);
    CHECK(gagliardo_seminorm(f, s).seminorm2 == doctest::Approx(oracle).epsilon(1e-7));
  }
}

TEST_CASE("divergence flags") {
  PiecewiseConstantFn f = PiecewiseConstantFn::zero(interval(2, 3), 1);
  f.values = {Complex(1, 0), Complex(0, 0)};
  CHECK(gagliardo_seminorm(f, 0.5).divergent);
  CHECK(gagliardo_seminorm(f, 0.7).divergent);
  PiecewiseConstantFn c = PiecewiseConstantFn::zero(interval(2, 3), 2);
  for (auto& v : c.values) v = Complex(3.0, 0.0);
  CHECK_FALSE(gagliardo_seminorm(c, 0.7).divergent);  // constants stay finite
  CHECK_THROWS_AS(gagliardo_seminorm(f, 1.2), std::invalid_argument);
}

TEST_CASE("d = 2 Monte Carlo matches its quadrature oracle") {
  // half-square indicator, moderate budget here (the acceptance suite runs
  // the full 1e6-sample version)
  const auto dec = square(2, 10);
  PiecewiseConstantFn f = PiecewiseConstantFn::zero(dec, 1);
  f.values = {Complex(1, 0), Complex(0, 0)};
  const double s = 0.25;
  const double oracle = half_square_gagliardo_oracle(s);
  const GagliardoResult mc = gagliardo_seminorm_mc(f, s, 6, 200000, 2024);
  CHECK(mc.stderr2 > 0.0);
  CHECK(std::abs(mc.seminorm2 - oracle) <= 3.0 * mc.stderr2 + 1e-6 * oracle);
  // determinism for a fixed seed
  const GagliardoResult again = gagliardo_seminorm_mc(f, s, 6, 200000, 2024);
  CHECK(again.seminorm2 == mc.seminorm2);
}
