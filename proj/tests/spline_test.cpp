#include <doctest.h>

#include <cmath>
#include <random>

#include "spou/errors.hpp"
#include "spou/pou.hpp"
#include "spou/spline.hpp"
#include "test_util.hpp"

using namespace spou;
using testutil::near_abs;

namespace {

// closed forms for the first two nontrivial orders
double h2_closed(double x, double c) {
  x = std::abs(x);
  if (x <= c * c || x >= 1.0) return 0.0;
  if (x <= c) return 2.0 * x / c - 2.0 * c;
  return 2.0 - 2.0 * x;
}

double h3_closed(double x, double c) {
  x = std::abs(x);
  const double c2 = c * c, c3 = c * c * c;
  if (x <= c3 || x >= 1.0) return 0.0;
  if (x <= c2) return 2.0 * x * x / c3 - 4.0 * x + 2.0 * c3;
  if (x <= c) return -2.0 * (1.0 / c + 1.0 / c2) * x * x + 4.0 * (c + 1.0 / c) * x -
                      2.0 * (c + c2);
  return 2.0 * (1.0 - x) * (1.0 - x);
}

}  // namespace

TEST_CASE("orders two and three reproduce their closed forms") {
  for (double c : {0.3, 0.5, 0.8}) {
    const PiecewiseEvenSpline h2 = build_spline(2, c);
    const PiecewiseEvenSpline h3 = build_spline(3, c);
    for (int i = 0; i < 1000; ++i) {
      const double x = -1.1 + 2.2 * (i + 0.5) / 1000;
      CHECK(near_abs(h2(x), h2_closed(x, c), 1e-12));
      CHECK(near_abs(h3(x), h3_closed(x, c), 1e-12));
    }
  }
}

TEST_CASE("point evaluations frozen from hand arithmetic") {
  const PiecewiseEvenSpline h2 = build_spline(2, 0.5);
  CHECK(near_abs(h2(0.4), 0.6, 1e-15));
  CHECK(near_abs(h2(-0.75), 0.5, 1e-15));
  const PiecewiseEvenSpline h3 = build_spline(3, 0.5);
  CHECK(near_abs(h3(0.75), 0.125, 1e-15));          // 2 (1 - 3/4)^2
  CHECK(near_abs(h3(0.2), 0.09, 1e-15));            // 16 x^2 - 4 x + 1/4 at 0.2
}

TEST_CASE("order one is the half-open shell indicator") {
  for (double c : {0.3, 0.5, 0.8}) {
    const PiecewiseEvenSpline h1 = build_spline(1, c);
    CHECK(h1(c) == 0.0);  // half-open at the inner edge
    CHECK(h1(1.0) == 1.0);
    CHECK(h1(c * (1.0 + 1e-9)) == 1.0);
    CHECK(h1(1.0 + 1e-12) == 0.0);
    CHECK(h1(-0.99) == (0.99 > c ? 1.0 : 0.0));
    CHECK(h1(0.0) == 0.0);
  }
}

TEST_CASE("evenness is exact and support is sharp") {
  const PiecewiseEvenSpline h5 = build_spline(5, 0.3);
  std::mt19937 rng(61);
  std::uniform_real_distribution<double> uni(0.0, 1.2);
  for (int i = 0; i < 1000; ++i) {
    const double x = uni(rng);
    CHECK(h5(x) == h5(-x));  // bitwise: evaluation goes through |x|
  }
  const double lo = std::pow(0.3, 5);
  for (int i = 0; i < 1000; ++i) {
    const double inside = lo + (1.0 - lo) * (i + 0.5) / 1000;
    CHECK(h5(inside) > 0.0);
  }
  CHECK(h5(lo * 0.999) == 0.0);
  CHECK(h5(1.0001) == 0.0);
}

TEST_CASE("derivatives match finite differences away from knots") {
  const PiecewiseEvenSpline h4 = build_spline(4, 0.6);
  auto fd = [&](double x, double h) { return (h4(x + h) - h4(x - h)) / (2.0 * h); };
  for (double x : {0.95, 0.5, 0.3, 0.8}) {
    CHECK(near_abs(h4.derivative(x, 1), fd(x, 1e-6), 1e-5));
  }
  // odd orders flip sign under reflection
  CHECK(near_abs(h4.derivative(-0.8, 1), -h4.derivative(0.8, 1), 1e-15));
  CHECK(near_abs(h4.derivative(-0.8, 2), h4.derivative(0.8, 2), 1e-15));
  // hand value: d/dx 2(1-x)^2 = -4(1-x)
  const PiecewiseEvenSpline h3 = build_spline(3, 0.5);
  CHECK(near_abs(h3.derivative(0.75, 1), -1.0, 1e-14));
  // beyond the piece degree everything is flat
  CHECK(h4.derivative(0.5, 4) == 0.0);
  CHECK(h4.derivative(0.5, 9) == 0.0);
  CHECK_THROWS_AS(h4.derivative(0.5, -1), input_error);
}

TEST_CASE("integrals are exact piecewise antiderivatives") {
  for (double c : {0.3, 0.5, 0.8}) {
    CHECK(near_abs(build_spline(1, c).integral(), 2.0 * (1.0 - c), 1e-14));
    // closed form for order 2: 2 (1-c)^2 (1+c)
    CHECK(near_abs(build_spline(2, c).integral(), 2.0 * (1.0 - c) * (1.0 - c) * (1.0 + c),
                   1e-13));
  }
  CHECK(near_abs(build_spline(2, 0.5).integral(), 0.75, 1e-15));

  // quadrature oracle across orders and ratios
  for (double c : {0.3, 0.5, 0.8}) {
    for (int n = 1; n <= 6; ++n) {
      const PiecewiseEvenSpline h = build_spline(n, c);
      const Function1D f = as_integrand(h);
      const auto q = integrate(f.f, -1.0, 1.0, {}, f.breakpoints);
      CHECK(near_abs(h.integral(), q.value, 1e-12));
    }
  }

  const auto qs = spline_integrals(4, 0.5);
  REQUIRE(qs.size() == 4);
  CHECK(near_abs(qs[0], 1.0, 1e-15));
  CHECK(near_abs(qs[1], 0.75, 1e-15));
  CHECK(near_abs(qs[3], build_spline(4, 0.5).integral(), 0.0));

  // degenerate zero pieces integrate to zero
  std::vector<SplinePiece> zero_pieces(2);
  zero_pieces[0].coeff = {0.0};
  zero_pieces[1].coeff = {0.0};
  CHECK(PiecewiseEvenSpline(2, 0.5, zero_pieces).integral() == 0.0);
}

TEST_CASE("partial integrals accumulate across pieces") {
  const PiecewiseEvenSpline h2 = build_spline(2, 0.5);
  CHECK(h2.integral_from_zero(0.2) == 0.0);
  CHECK(near_abs(h2.integral_from_zero(10.0), h2.integral() / 2.0, 1e-15));
  // int_0^{0.5} (4t - 1) dt from 0.25
  CHECK(near_abs(h2.integral_from_zero(0.5), 0.125, 1e-15));
  CHECK(near_abs(h2.integral_from_zero(-0.5), -0.125, 1e-15));
}

TEST_CASE("interior knots are C^{n-2} with a genuine order-(n-1) jump") {
  for (double c : {0.3, 0.5, 0.8}) {
    for (int n = 2; n <= 10; ++n) {
      const auto rep = knot_smoothness(build_spline(n, c));
      CHECK(rep.max_relative_mismatch <= 1e-9);
      double max_jump = 0.0;
      for (const auto& e : rep.jumps)
        max_jump = std::max(max_jump, std::abs(e.left - e.right) / e.scale);
      CHECK(max_jump > 1e-6);  // sharpness witness
    }
  }
}

TEST_CASE("recursion and integral transform agree") {
  const auto r2 = transform_consistency_check(2, 0.5, {}, 1000);
  CHECK(r2.max_deviation <= 1e-12);
  const auto r5 = transform_consistency_check(5, 0.7, {}, 400);
  CHECK(r5.max_deviation <= 1e-10);
  // both sides vanish beyond the support
  const PiecewiseEvenSpline h3 = build_spline(3, 0.5);
  const Function1D f2 = as_integrand(build_spline(2, 0.5));
  CHECK(transform_1d(f2, 0.5, 1.4, {}) == 0.0);
  CHECK(h3(1.4) == 0.0);
}

TEST_CASE("normalized shells sum to one on the outer band") {
  for (double c : {0.3, 0.5, 0.8}) {
    // clustered knots (c = 0.8) cost ~1e-11 of monomial-coefficient rounding
    // at order 10, so they get the coarser budget
    const double tol = c == 0.8 ? 1e-10 : 1e-12;
    for (int n = 2; n <= 10; ++n) {
      PartitionSystem sys = normalized_partition(n, c);
      DilationEngine engine(sys);
      for (int i = 0; i < 100; ++i) {
        const double x[1] = {c + (1.0 - c) * (i + 0.5) / 100};
        const auto r = engine.sum(x);
        CHECK(r.certified);
        CHECK(near_abs(r.sum.real(), 1.0, tol));
        CHECK(r.n_terms <= n + 2);  // at most n nonzero terms reach the annulus
      }
    }
  }
  // boundary sample: interior terms carry the sum at x = 1
  PartitionSystem sys = normalized_partition(3, 0.5);
  DilationEngine engine(sys);
  const double one[1] = {1.0};
  CHECK(near_abs(engine.sum(one).sum.real(), 1.0, 1e-12));
  // hand-checked pair of terms at x = 0.6, n = 2
  PartitionSystem sys2 = normalized_partition(2, 0.5);
  const double x[1] = {0.6};
  CHECK(near_abs(DilationEngine(sys2).sum(x).sum.real(), 1.0, 1e-14));
}

TEST_CASE("normalized order-1 shells tile with unit target") {
  PartitionSystem sys = normalized_partition(1, 0.5);
  CHECK(sys.target_constant == 1.0);
  DilationEngine engine(sys);
  std::mt19937 rng(71);
  std::uniform_real_distribution<double> uni(0.07, 9.0);
  for (int i = 0; i < 200; ++i) {
    const double x[1] = {uni(rng)};
    CHECK(near_abs(engine.sum(x).sum.real(), 1.0, 1e-14));
  }
}

TEST_CASE("telescoping witness matches the shell partition") {
  PartitionSystem sys = normalized_partition(4, 0.55);
  REQUIRE(sys.phi);
  // partial sums against the witness: sum_{j=-M}^{N} g(c^j x) =
  // phi(c^{-M} x) - phi(c^{N+1} x)
  DilationEngine engine(sys);
  std::mt19937 rng(73);
  std::uniform_real_distribution<double> uni(0.6, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const double x = uni(rng);
    for (int back = 0; back <= 6; ++back) {
      for (int fwd = 0; fwd <= 6; ++fwd) {
        double acc = 0.0;
        for (int j = -back; j <= fwd; ++j) {
          const double xj[1] = {std::pow(0.55, j) * x};
          acc += sys.g(xj);
        }
        const double lo[1] = {std::pow(0.55, -back) * x};
        const double hi[1] = {std::pow(0.55, fwd + 1) * x};
        CHECK(near_abs(acc, (*sys.phi).phi(lo) - (*sys.phi).phi(hi), 1e-11));
      }
    }
  }
}

TEST_CASE("normalized shells have square sums inside (0, 1]") {
  for (int n = 2; n <= 6; ++n) {
    PartitionSystem sys = normalized_partition(n, 0.5);
    const auto samples = testutil::uniform_points_1d(0.5 + 1e-9, 1.0, 500);
    const auto [lo, hi] = square_sum_bounds(sys, samples);
    CHECK(lo > 0.0);
    CHECK(hi <= 1.0 + 1e-12);
  }
}

TEST_CASE("construction guards") {
  CHECK_THROWS_AS(build_spline(0, 0.5), input_error);
  CHECK_THROWS_AS(build_spline(2, 0.0), input_error);
  CHECK_THROWS_AS(build_spline(2, 1.0), input_error);
  CHECK_THROWS_AS(build_spline(2, 1e-10), input_error);
  CHECK_THROWS_AS(build_spline(2, 1.0 - 1e-10), input_error);
  CHECK_THROWS_AS(build_spline(31, 0.5), spou::range_error);
  CHECK_NOTHROW(build_spline(30, 0.5));
  CHECK_THROWS_AS(transform_consistency_check(1, 0.5), input_error);
}
