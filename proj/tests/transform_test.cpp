#include <doctest.h>

#include <cmath>
#include <random>

#include "spou/errors.hpp"
#include "spou/quadrature.hpp"
#include "spou/spline.hpp"
#include "spou/transform.hpp"
#include "test_util.hpp"

using namespace spou;
using testutil::near_abs;

namespace {

// kernel field for the 1-D specialization: indicator of c < |x| <= 1
ScalarField shell_kernel(double c, int dim) {
  ScalarField f = ScalarField::real(dim, [c](std::span<const double> x) {
    const double a = vec_norm(x, Norm::euclidean);
    return (a > c && a <= 1.0) ? 1.0 : 0.0;
  });
  f.support = Annulus{c, 1.0, Norm::euclidean};
  return f;
}

}  // namespace

TEST_CASE("quadrature integrates elementary closed forms") {
  const auto r1 = integrate([](double t) { return std::exp(t); }, 1.0, 2.0);
  CHECK(near_abs(r1.value, std::exp(2.0) - std::exp(1.0), 1e-13));
  const auto r2 = integrate([](double t) { return t * t * t; }, -1.0, 3.0);
  CHECK(near_abs(r2.value, 20.0, 1e-12));
  // orientation flips the sign
  const auto r3 = integrate([](double t) { return t; }, 1.0, 0.0);
  CHECK(near_abs(r3.value, -0.5, 1e-14));
  // breakpoints make a kink exact
  const auto r4 = integrate([](double t) { return std::abs(t); }, -1.0, 1.0, {},
                            std::vector<double>{0.0});
  CHECK(near_abs(r4.value, 1.0, 1e-14));
}

TEST_CASE("quadrature reports exhaustion with its best estimate") {
  QuadratureSpec tight;
  tight.abs_tol = 1e-14;
  tight.max_depth = 3;
  bool threw = false;
  try {
    integrate([](double t) { return 1.0 / std::sqrt(std::abs(t - 0.3) + 1e-14); }, 0.0, 1.0,
              tight);
  } catch (const quadrature_error& e) {
    threw = true;
    CHECK(std::isfinite(e.best_estimate));
    CHECK(e.error_bound > tight.abs_tol);
    // the estimate is rough at depth 3 but must be in the right ballpark
    CHECK(near_abs(e.best_estimate, 2.0 * (std::sqrt(0.7) + std::sqrt(0.3)), 0.5));
  }
  CHECK(threw);
}

TEST_CASE("shell transform of the exponential matches its closed form") {
  const Function1D f = integrands::exp_abs();
  // 2 (e^{-|x|} - e^{-|x|/c})
  CHECK(near_abs(transform_1d(f, 0.5, 1.0, {}), 2.0 * (std::exp(-1.0) - std::exp(-2.0)), 1e-12));
  CHECK(near_abs(transform_1d(f, 0.5, 2.0, {}), 2.0 * (std::exp(-2.0) - std::exp(-4.0)), 1e-12));
  CHECK(transform_1d(f, 0.5, 0.0, {}) == 0.0);
  CHECK(transform_1d(integrands::gaussian(), 0.3, 0.0, {}) == 0.0);
}

TEST_CASE("shell transform of the indicator reproduces the order-2 spline") {
  const Function1D f = as_integrand(build_spline(1, 0.5));
  const PiecewiseEvenSpline h2 = build_spline(2, 0.5);
  CHECK(near_abs(transform_1d(f, 0.5, 0.75, {}), 0.5, 1e-13));
  CHECK(near_abs(transform_1d(f, 0.5, 0.75, {}), h2(0.75), 1e-13));
}

TEST_CASE("even-input shortcut agrees with the two-shell form") {
  const Function1D h1 = as_integrand(build_spline(1, 0.5));
  // hand integral: 2 int_{0.3}^{0.6} indicator(0.5 < t <= 1) = 2 * 0.1
  CHECK(near_abs(transform_even(h1, 0.5, 0.3, {}), 0.2, 1e-13));
  // cross-check with the closed form 2|x|/c - 2c on [c^2, c]
  CHECK(near_abs(transform_even(h1, 0.5, 0.3, {}), 4.0 * 0.3 - 1.0, 1e-13));
  CHECK(transform_even(h1, 0.5, 0.0, {}) == 0.0);

  const Function1D e = integrands::exp_abs();
  CHECK(near_abs(transform_even(e, 0.5, 2.0, {}), 2.0 * (std::exp(-2.0) - std::exp(-4.0)),
                 1e-12));
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> uni(0.0, 2.0);
  for (int i = 0; i < 50; ++i) {
    const double x = uni(rng);
    CHECK(near_abs(transform_even(e, 0.5, x, {}), transform_1d(e, 0.5, x, {}), 1e-12));
  }
  CHECK_THROWS_AS(transform_even(e, 0.5, -1.0, {}), input_error);
}

TEST_CASE("transform output is even for arbitrary integrands") {
  // deliberately asymmetric integrand
  Function1D f;
  f.f = [](double t) { return t > 0.0 ? std::exp(t) * 0.1 : 0.5 * std::cos(t); };
  f.breakpoints = {0.0};
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> uni(0.01, 2.5);
  for (int i = 0; i < 60; ++i) {
    const double x = uni(rng);
    CHECK(near_abs(transform_1d(f, 0.4, x, {}), transform_1d(f, 0.4, -x, {}), 2e-12));
  }
}

TEST_CASE("d = 1 radial transform reduces to the shell transform") {
  TransformSpec spec;
  spec.g_kernel = shell_kernel(0.5, 1);
  spec.c = 0.5;
  RadialFunction f;
  f.profile = integrands::exp_abs();
  f.dim = 1;
  for (double x : {0.25, 1.0, 2.0}) {
    const double g[1] = {x};
    CHECK(near_abs(transform_dd(f, spec, g), transform_1d(f.profile, 0.5, x, {}), 1e-11));
  }
  RadialFunction h1;
  h1.profile = as_integrand(build_spline(1, 0.5));
  h1.dim = 1;
  h1.support = Annulus{0.5, 1.0, Norm::euclidean};
  const double g[1] = {0.75};
  CHECK(near_abs(transform_dd(h1, spec, g), 0.5, 1e-12));

  RadialFunction zero;
  zero.profile.f = [](double) { return 0.0; };
  zero.profile.support = {{-2.0, 2.0}};
  zero.dim = 1;
  zero.support = Annulus{0.0, 2.0, Norm::euclidean};
  CHECK(transform_dd(zero, spec, g) == 0.0);
}

TEST_CASE("annular supports multiply through the radial transform") {
  // integrand supported on 1 <= ||t|| <= 2, kernel on 0.5 <= ||x|| <= 1:
  // output lives in 0.5 <= ||gamma|| <= 2
  TransformSpec spec;
  spec.g_kernel = shell_kernel(0.5, 2);
  RadialFunction f;
  f.dim = 2;
  f.profile.f = [](double s) { return (s >= 1.0 && s <= 2.0) ? 1.0 : 0.0; };
  f.profile.breakpoints = {1.0, 2.0};
  f.profile.support = {{1.0, 2.0}};
  f.support = Annulus{1.0, 2.0, Norm::euclidean};

  for (double r : {0.4, 0.49, 2.05, 3.0}) {
    const double g[2] = {r, 0.0};
    CHECK(near_abs(transform_dd(f, spec, g), 0.0, 1e-14));
  }
  const double inside[2] = {0.0, 1.0};
  CHECK(transform_dd(f, spec, inside) > 0.0);
}

TEST_CASE("unbounded kernel with non-compact integrand is refused") {
  TransformSpec spec;
  spec.g_kernel = ScalarField::real(1, [](std::span<const double>) { return 1.0; });
  RadialFunction f;
  f.profile = integrands::gaussian();
  f.dim = 1;
  const double g[1] = {1.0};
  CHECK_THROWS_AS(transform_dd(f, spec, g), input_error);
}

TEST_CASE("generalized kernel form matches the canonical kernel on compact input") {
  RadialFunction f;
  f.profile = as_integrand(build_spline(1, 0.5));
  f.dim = 1;
  f.support = Annulus{0.5, 1.0, Norm::euclidean};
  auto kernel = [](double s, std::span<const double> gamma) {
    const double ratio = std::abs(gamma[0]) / s;
    return (ratio > 0.5 && ratio <= 1.0) ? 1.0 : 0.0;
  };
  TransformSpec spec;
  spec.g_kernel = shell_kernel(0.5, 1);
  for (double x : {0.3, 0.6, 0.75, 0.9}) {
    const double g[1] = {x};
    CHECK(near_abs(transform_dd_general(f, kernel, {}, g, Norm::euclidean),
                   transform_dd(f, spec, g), 1e-12));
  }
}

TEST_CASE("transform preserves the dilation-sum constant") {
  // h = K f sums to int f = 2 under dilation by c
  PartitionSystem sys = lifted_partition_system(integrands::exp_abs(), 0.5, Norm::euclidean, 1);
  CHECK(near_abs(sys.target_constant, 2.0, 1e-11));
  DilationEngine engine(sys);
  std::mt19937 rng(19);
  std::uniform_real_distribution<double> uni(0.05, 3.0);
  for (int i = 0; i < 100; ++i) {
    const double x[1] = {uni(rng)};
    const auto r = engine.sum(x);
    CHECK(r.certified);
    CHECK(near_abs(r.sum.real(), 2.0, 1e-9));
  }
}

TEST_CASE("transforming the indicator lifts its regularity") {
  // the output is continuous at the knots even though the input jumps there
  const Function1D f = as_integrand(build_spline(1, 0.5));
  for (double knot : {0.25, 0.5, 1.0}) {
    const double eps = 1e-7;
    const double left = transform_1d(f, 0.5, knot - eps, {});
    const double right = transform_1d(f, 0.5, knot + eps, {});
    CHECK(near_abs(left, right, 1e-5));
  }
}

TEST_CASE("nonnegative integrands produce nonnegative transforms") {
  const Function1D f = integrands::exp_abs();
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> uni(-4.0, 4.0);
  for (int i = 0; i < 200; ++i) {
    CHECK(transform_1d(f, 0.7, uni(rng), {}) >= 0.0);
  }
}

TEST_CASE("radial lifting evaluates through the vector norm") {
  const ScalarField lifted = lift_radial(as_integrand(build_spline(1, 0.5)), 0.5,
                                         Norm::euclidean, 2);
  const double g[2] = {0.45, 0.6};  // norm 0.75
  CHECK(near_abs(lifted(g), 0.5, 1e-12));
  const double zero[2] = {0.0, 0.0};
  CHECK(lifted(zero) == 0.0);
  REQUIRE(lifted.support);
  CHECK(near_abs(lifted.support->r_lo, 0.25, 1e-15));  // c * inner edge of supp f
  CHECK(near_abs(lifted.support->r_hi, 1.0, 1e-15));

  // lifted indicator sums to Q_1 = 2(1-c) = 1 under dilation by c
  PartitionSystem sys =
      lifted_partition_system(as_integrand(build_spline(1, 0.5)), 0.5, Norm::euclidean, 2);
  CHECK(near_abs(sys.target_constant, 1.0, 1e-12));
  DilationEngine engine(sys);
  std::mt19937 rng(37);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  int checked = 0;
  for (int i = 0; i < 200; ++i) {
    const double x[2] = {uni(rng), uni(rng)};
    if (vec_norm(x, Norm::euclidean) < 0.05) continue;
    CHECK(near_abs(engine.sum(x).sum.real(), 1.0, 1e-9));
    ++checked;
  }
  CHECK(checked > 150);
}
