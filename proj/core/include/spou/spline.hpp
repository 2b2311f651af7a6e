#pragma once

#include <vector>

#include "spou/field.hpp"
#include "spou/pou.hpp"
#include "spou/quadrature.hpp"
#include "spou/transform.hpp"

namespace spou {

inline constexpr int kMaxSplineOrder = 30;  // conditioning guard for the monomial basis

struct SplinePiece {
  double lo = 0.0, hi = 0.0;
  std::vector<double> coeff;  // monomial coefficients, ascending powers
};

/// Even piecewise polynomial with geometric knots c^n < c^{n-1} < ... < 1 on
/// the positive axis, mirrored by evenness. Order n has n pieces of degree
/// <= n-1, support [c^n, 1] (for n = 1 the half-open (c, 1] applies) and
/// C^{n-2} smoothness across interior knots.
class PiecewiseEvenSpline {
 public:
  PiecewiseEvenSpline(int order, double ratio, std::vector<SplinePiece> pieces);

  int order() const { return order_; }
  double ratio() const { return c_; }
  const std::vector<double>& knots() const { return knots_; }  // ascending, positive half
  const std::vector<SplinePiece>& pieces() const { return pieces_; }

  double operator()(double gamma) const;
  // m-th derivative; even reflection flips sign for odd m. Orders beyond the
  // piece degree are identically zero.
  double derivative(double gamma, int m) const;

  double integral() const;                   // over all of R (evenness doubled)
  double integral_from_zero(double x) const; // int_0^x, exact piecewise antiderivative

  Annulus support() const { return Annulus{knots_.front(), knots_.back(), Norm::euclidean}; }

 private:
  int piece_index(double x) const;

  int order_;
  double c_;
  std::vector<double> knots_;
  std::vector<SplinePiece> pieces_;  // pieces_[i] lives on [knots_[i], knots_[i+1]]
};

// h_1 = indicator of (c, 1]; h_n from the degree-raising recursion
//   h_n = (2/(n-1)) [ (1-|x|) h_{n-1}(x) + (|x|/c - c^{n-1}) h_{n-1}(x/c) ]
// carried out exactly on the monomial coefficients.
PiecewiseEvenSpline build_spline(int n, double c);

// Q_1 .. Q_n.
std::vector<double> spline_integrals(int n, double c);

struct KnotMatchReport {
  struct Entry {
    double knot;
    int deriv_order;
    double left, right;
    double scale;  // magnitude reference for relative comparison
  };
  std::vector<Entry> matched;   // orders 0 .. n-2 at interior knots + support ends
  std::vector<Entry> jumps;     // order n-1 jumps (sharpness witnesses)
  double max_relative_mismatch = 0.0;
};

// Derivative agreement of adjacent pieces at every knot, by coefficient
// arithmetic (no quadrature).
KnotMatchReport knot_smoothness(const PiecewiseEvenSpline& s);

struct ConsistencyReport {
  double max_deviation = 0.0;
  double argmax = 0.0;
  int n_points = 0;
};

// Cross-validates the recursion against the integral-transform definition:
// evaluates the transform of h_{n-1} by quadrature on a gamma grid and
// compares with the exact pieces of h_n.
ConsistencyReport transform_consistency_check(int n, double c, const QuadratureSpec& quad = {},
                                              int grid_points = 1000);

// g = h_n / Q_{n-1}, dilation by c, target 1. For n = 1 the tiling of the
// dyadic-like shells gives target 1 with no normalizer.
PartitionSystem normalized_partition(int n, double c);

ScalarField as_field(const PiecewiseEvenSpline& s);
Function1D as_integrand(const PiecewiseEvenSpline& s);

}  // namespace spou
