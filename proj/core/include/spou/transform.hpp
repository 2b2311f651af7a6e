#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spou/field.hpp"
#include "spou/pou.hpp"
#include "spou/quadrature.hpp"

namespace spou {

/// 1-D integrand with quadrature metadata: breakpoints are pre-split
/// locations (knots, kinks) so piecewise-polynomial inputs integrate exactly.
struct Function1D {
  std::function<double(double)> f;
  std::vector<double> breakpoints;
  std::optional<std::pair<double, double>> support;  // f = 0 outside [lo, hi]
  // tighter support in |t| for even integrands with a hole at the origin:
  // f = 0 unless abs_support.first <= |t| <= abs_support.second
  std::optional<std::pair<double, double>> abs_support;
  std::string name;

  double operator()(double t) const { return f(t); }
};

namespace integrands {

Function1D gaussian();             // e^{-t^2}
Function1D exp_abs();              // e^{-|t|}
Function1D step(double r);         // indicator of [-r, r]
Function1D plateau_linear(double r1, double r);  // even trapezoid
// "gaussian" | "exp-abs" | "step:R" | "plateau-linear:R1:R"
Function1D from_spec(const std::string& spec);

}  // namespace integrands

// Quadrature over the two shells |gamma| <= |t| < |gamma|/c:
//   h(gamma) = int_{-|gamma|/c}^{-|gamma|} f + int_{|gamma|}^{|gamma|/c} f.
// h(0) = 0 (both ranges empty).
double transform_1d(const Function1D& f, double c, double gamma, const QuadratureSpec& quad = {});

// Same, carrying the quadrature error bound.
IntegrationResult transform_1d_result(const Function1D& f, double c, double gamma,
                                      const QuadratureSpec& quad = {});

// Even-input shortcut h(gamma) = 2 int_gamma^{gamma/c} f for gamma >= 0.
double transform_even(const Function1D& f, double c, double gamma,
                      const QuadratureSpec& quad = {});

// Kernel data for the d-dimensional transform f -> int f(t) g(gamma/||t||) dt.
struct TransformSpec {
  ScalarField g_kernel;
  Norm norm = Norm::euclidean;
  double c = 0.5;
  QuadratureSpec quad;
};

// Radial integrand on R^d: t -> profile(||t||).
struct RadialFunction {
  Function1D profile;
  int dim = 1;
  std::optional<Annulus> support;
};

// d-dimensional transform for radial f; reduces to a single radial
// quadrature because the kernel depends on t only through ||t||.
double transform_dd(const RadialFunction& f, const TransformSpec& spec,
                    std::span<const double> gamma);

// Support the output is contained in: annuli multiply, a(R3 R1, R4 R2).
// Empty when either support is missing or unbounded.
std::optional<Annulus> transform_dd_output_support(const RadialFunction& f,
                                                   const TransformSpec& spec);

// Generalized-kernel variant: kernel(||t||, gamma) replaces g(gamma/||t||).
// Mechanism only; carries no dilation-sum guarantees. Requires compact f.
double transform_dd_general(const RadialFunction& f,
                            const std::function<double(double, std::span<const double>)>& kernel,
                            const QuadratureSpec& quad, std::span<const double> gamma, Norm norm);

// Radial lift x -> transform_1d(f, c, ||x||) as a field on R^d.
ScalarField lift_radial(const Function1D& f, double c, Norm norm, int dim,
                        const QuadratureSpec& quad = {});

// Lifted field packaged as a partition system: dilation c*I, target = int f,
// telescoping witness attached (phi(x) = int_{-||x||/c}^{||x||/c} f).
PartitionSystem lifted_partition_system(const Function1D& f, double c, Norm norm, int dim,
                                        const QuadratureSpec& quad = {});

}  // namespace spou
