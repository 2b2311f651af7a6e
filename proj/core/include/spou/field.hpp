#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "spou/matrix.hpp"

namespace spou {

// Radial shell r_lo <= ||x|| <= r_hi in a chosen norm. r_lo = 0 is a ball,
// r_hi = inf an exterior set.
struct Annulus {
  double r_lo = 0.0;
  double r_hi = std::numeric_limits<double>::infinity();
  Norm norm = Norm::euclidean;

  bool contains_radius(double r) const { return r >= r_lo && r <= r_hi; }
  bool bounded() const { return std::isfinite(r_hi); }
};

using RealFn = std::function<double(std::span<const double>)>;
using ComplexFn = std::function<std::complex<double>(std::span<const double>)>;

/// A scalar-valued function on R^d with declared support and smoothness
/// metadata. Real-valued by default; complex evaluators are carried for the
/// dilation-sum verifier but are rejected wherever nonnegativity claims are
/// made.
class ScalarField {
 public:
  ScalarField() = default;

  static ScalarField real(int dim, RealFn f) {
    ScalarField s;
    s.dim_ = dim;
    s.fn_ = std::move(f);
    return s;
  }
  static ScalarField complex_valued(int dim, ComplexFn f) {
    ScalarField s;
    s.dim_ = dim;
    s.fn_ = std::move(f);
    return s;
  }

  int dim() const { return dim_; }
  bool valid() const { return !std::holds_alternative<std::monostate>(fn_); }
  bool is_real() const { return std::holds_alternative<RealFn>(fn_); }

  double operator()(std::span<const double> x) const;
  std::complex<double> eval_complex(std::span<const double> x) const;

  std::optional<Annulus> support;
  std::string smoothness;      // informational, e.g. "C^k", "C^inf"
  std::optional<double> sup_bound;
  std::string note;            // construction warnings (uncertified tails, ...)

 private:
  int dim_ = 0;
  std::variant<std::monostate, RealFn, ComplexFn> fn_;
};

// Spot-check that the evaluator vanishes on sampled points outside the
// declared support; throws input_error on a violation.
void check_declared_support(const ScalarField& f, int samples_per_shell = 64,
                            unsigned seed = 0x5CA1E);

/// Profile r: [0, inf) -> R with r(0) = 1. Encodes the radial data behind
/// partition generators and frequency-side frame generators.
struct RadialProfile {
  std::function<double(double)> r;
  double support_radius = std::numeric_limits<double>::infinity();  // r = 0 beyond
  double plateau_radius = 0.0;                                      // r = 1 on [0, R1]
  bool monotone_decreasing = false;
  bool sampled_continuous = true;  // set by validate(); step profiles fail this
  std::string name;
  std::vector<double> params;

  // Checks r(0) = 1 and, when claimed, sampled monotonicity; flips
  // sampled_continuous when a sampled jump shows up (a step profile is usable
  // but loses the lower square-sum guarantee).
  void validate();
};

namespace profiles {

RadialProfile gaussian();                              // e^{-s^2}
RadialProfile exp_abs();                               // e^{-s}
RadialProfile plateau_linear(double r1, double r);     // 1 on [0,r1], linear to 0 at r
RadialProfile step(double r);                          // indicator of [0, r]

// Parses "gaussian", "exp-abs", "plateau-linear:R1:R", "step:R".
RadialProfile from_spec(const std::string& spec);

}  // namespace profiles

// Field x -> profile(||x||) in the given norm, with support metadata.
ScalarField radial_field(const RadialProfile& p, int dim, Norm norm);

}  // namespace spou
