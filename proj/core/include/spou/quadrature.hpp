#pragma once

#include <functional>
#include <span>
#include <vector>

namespace spou {

struct QuadratureSpec {
  double abs_tol = 1e-12;
  int max_depth = 40;
};

struct IntegrationResult {
  double value = 0.0;
  double error_bound = 0.0;
};

// Adaptive Gauss-Kronrod (G7/K15) on [a, b] (a > b allowed, sign flips).
// `breakpoints` are pre-split locations (kinks, jumps, knots); subintervals
// holding a single polynomial of degree <= 29 integrate to machine precision
// in one panel. Throws quadrature_error when the error bound still exceeds
// the tolerance after max_depth bisections.
IntegrationResult integrate(const std::function<double(double)>& f, double a, double b,
                            const QuadratureSpec& spec = {},
                            std::span<const double> breakpoints = {});

}  // namespace spou
