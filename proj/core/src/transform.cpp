#include "spou/transform.hpp"

#include <cmath>
#include <limits>

#include "spou/errors.hpp"

namespace spou {

namespace integrands {

Function1D gaussian() {
  Function1D f;
  f.f = [](double t) { return std::exp(-t * t); };
  f.name = "gaussian";
  return f;
}

Function1D exp_abs() {
  Function1D f;
  f.f = [](double t) { return std::exp(-std::abs(t)); };
  f.breakpoints = {0.0};
  f.name = "exp-abs";
  return f;
}

Function1D step(double r) {
  if (!(r > 0.0)) throw input_error("step integrand requires R > 0");
  Function1D f;
  f.f = [r](double t) { return std::abs(t) <= r ? 1.0 : 0.0; };
  f.breakpoints = {-r, r};
  f.support = {{-r, r}};
  f.name = "step";
  return f;
}

Function1D plateau_linear(double r1, double r) {
  if (!(r1 > 0.0) || !(r > r1)) throw input_error("plateau-linear requires 0 < R1 < R");
  Function1D f;
  f.f = [r1, r](double t) {
    const double s = std::abs(t);
    if (s <= r1) return 1.0;
    if (s >= r) return 0.0;
    return (r - s) / (r - r1);
  };
  f.breakpoints = {-r, -r1, r1, r};
  f.support = {{-r, r}};
  f.name = "plateau-linear";
  return f;
}

Function1D from_spec(const std::string& spec) {
  const RadialProfile p = profiles::from_spec(spec);  // reuse the parser
  if (p.name == "gaussian") return gaussian();
  if (p.name == "exp-abs") return exp_abs();
  if (p.name == "step") return step(p.params.at(0));
  if (p.name == "plateau-linear") return plateau_linear(p.params.at(0), p.params.at(1));
  throw input_error("unknown integrand: " + spec);
}

}  // namespace integrands

namespace {

void check_c(double c) {
  if (!(c > 1e-9) || !(c < 1.0 - 1e-9))
    throw input_error("transform ratio c must lie strictly inside (0, 1)");
}

IntegrationResult integrate_clipped(const Function1D& f, double a, double b,
                                    const QuadratureSpec& quad) {
  if (f.support) {
    a = std::max(a, f.support->first);
    b = std::min(b, f.support->second);
    if (a >= b) return {0.0, 0.0};
  }
  return integrate(f.f, a, b, quad, f.breakpoints);
}

}  // namespace

IntegrationResult transform_1d_result(const Function1D& f, double c, double gamma,
                                      const QuadratureSpec& quad) {
  check_c(c);
  if (!f.f) throw input_error("transform input has no evaluator");
  const double a = std::abs(gamma);
  if (a == 0.0) return {0.0, 0.0};
  const auto neg = integrate_clipped(f, -a / c, -a, quad);
  const auto pos = integrate_clipped(f, a, a / c, quad);
  return {neg.value + pos.value, neg.error_bound + pos.error_bound};
}

double transform_1d(const Function1D& f, double c, double gamma, const QuadratureSpec& quad) {
  return transform_1d_result(f, c, gamma, quad).value;
}

double transform_even(const Function1D& f, double c, double gamma, const QuadratureSpec& quad) {
  check_c(c);
  if (gamma < 0.0) throw input_error("transform_even expects gamma >= 0");
  if (gamma == 0.0) return 0.0;
  return 2.0 * integrate_clipped(f, gamma, gamma / c, quad).value;
}

namespace {

// d * volume of the unit ball: the co-area factor for radial integrals
// int f = kappa_d * int_0^inf F(s) s^{d-1} ds.
double coarea_factor(int dim, Norm norm) {
  if (norm == Norm::max) return dim * std::pow(2.0, dim);
  return 2.0 * std::pow(M_PI, dim / 2.0) / std::tgamma(dim / 2.0);
}

}  // namespace

double transform_dd(const RadialFunction& f, const TransformSpec& spec,
                    std::span<const double> gamma) {
  if (f.dim < 1) throw input_error("transform_dd needs dim >= 1");
  if (static_cast<int>(gamma.size()) != f.dim) throw input_error("gamma dimension mismatch");
  if (!spec.g_kernel.valid() || spec.g_kernel.dim() != f.dim)
    throw input_error("kernel field missing or of wrong dimension");

  const bool kernel_annular = spec.g_kernel.support && spec.g_kernel.support->r_lo > 0.0 &&
                              spec.g_kernel.support->bounded();
  const bool f_compact = f.support && f.support->bounded();
  if (!kernel_annular && !f_compact)
    throw input_error(
        "transform_dd refused: kernel support unbounded and integrand not compactly supported");

  const double gnorm = vec_norm(gamma, spec.norm);
  double s_lo = 0.0, s_hi = std::numeric_limits<double>::infinity();
  if (kernel_annular) {
    // g(gamma/s) can be nonzero only for ||gamma||/r_hi <= s <= ||gamma||/r_lo
    if (gnorm == 0.0) return 0.0;
    s_lo = gnorm / spec.g_kernel.support->r_hi;
    s_hi = gnorm / spec.g_kernel.support->r_lo;
  }
  if (f.support) {
    s_lo = std::max(s_lo, f.support->r_lo);
    s_hi = std::min(s_hi, f.support->r_hi);
  }
  if (f.profile.support) {
    s_lo = std::max(s_lo, std::max(0.0, f.profile.support->first));
    s_hi = std::min(s_hi, f.profile.support->second);
  }
  if (!(s_hi > s_lo)) return 0.0;
  if (!std::isfinite(s_hi))
    throw input_error("transform_dd refused: unbounded radial integration range");

  const double kd = coarea_factor(f.dim, spec.norm);
  const int d = f.dim;
  std::vector<double> scaled(d);
  auto integrand = [&](double s) {
    for (int i = 0; i < d; ++i) scaled[i] = gamma[i] / s;
    double w = f.profile(s) * spec.g_kernel(scaled);
    for (int i = 1; i < d; ++i) w *= s;
    return w;
  };
  return kd * integrate(integrand, s_lo, s_hi, spec.quad, f.profile.breakpoints).value;
}

double transform_dd_general(const RadialFunction& f,
                            const std::function<double(double, std::span<const double>)>& kernel,
                            const QuadratureSpec& quad, std::span<const double> gamma,
                            Norm norm) {
  if (!f.support || !f.support->bounded())
    throw input_error("generalized-kernel transform requires a compactly supported integrand");
  const double s_lo = f.support->r_lo;
  const double s_hi = f.support->r_hi;
  const double kd = coarea_factor(f.dim, norm);
  const int d = f.dim;
  auto integrand = [&](double s) {
    double w = f.profile(s) * kernel(s, gamma);
    for (int i = 1; i < d; ++i) w *= s;
    return w;
  };
  return kd * integrate(integrand, s_lo, s_hi, quad, f.profile.breakpoints).value;
}

ScalarField lift_radial(const Function1D& f, double c, Norm norm, int dim,
                        const QuadratureSpec& quad) {
  check_c(c);
  if (dim < 1) throw input_error("lift dimension must be >= 1");
  Function1D ff = f;
  ScalarField out = ScalarField::real(dim, [ff, c, norm, quad](std::span<const double> x) {
    return transform_1d(ff, c, vec_norm(x, norm), quad);
  });
  if (f.abs_support) {
    // |gamma| in [c*A, B] where [A, B] is the |t|-range of supp f
    out.support = Annulus{c * f.abs_support->first, f.abs_support->second, norm};
  } else if (f.support) {
    const double lo = f.support->first, hi = f.support->second;
    const double a = lo > 0.0 ? lo : (hi < 0.0 ? -hi : 0.0);
    const double b = std::max(std::abs(lo), std::abs(hi));
    out.support = Annulus{c * a, b, norm};
  }
  out.smoothness = "C^0";  // one degree above the input
  return out;
}

PartitionSystem lifted_partition_system(const Function1D& f, double c, Norm norm, int dim,
                                        const QuadratureSpec& quad) {
  check_c(c);
  PartitionSystem sys;
  sys.M = SquareMatrix::scalar(dim, c);
  sys.norm = norm;
  sys.g = lift_radial(f, c, norm, dim, quad);

  // effective range [-48, 48] covers the builtin decaying integrands to well
  // below the quadrature tolerance
  const double lo = f.support ? f.support->first : -48.0;
  const double hi = f.support ? f.support->second : 48.0;
  const double total = integrate(f.f, lo, hi, quad, f.breakpoints).value;
  sys.target_constant = total;

  Function1D ff = f;
  PhiWitness wit;
  // h(x) = Phi(||x||/c) - Phi(||x||) with Phi(s) = int_{-s}^{s} f: the
  // telescoping companion is Phi(||x||/c).
  wit.phi = ScalarField::real(dim, [ff, c, norm, quad](std::span<const double> x) {
    const double s = vec_norm(x, norm) / c;
    if (s == 0.0) return 0.0;
    double a = -s, b = s;
    if (ff.support) {
      a = std::max(a, ff.support->first);
      b = std::min(b, ff.support->second);
      if (a >= b) return 0.0;
    }
    return integrate(ff.f, a, b, quad, ff.breakpoints).value;
  });
  wit.limit_backward = total;  // Phi(inf) = int f
  wit.limit_forward = 0.0;     // Phi(0) = 0
  sys.phi = std::move(wit);
  sys.description = "lifted-transform f=" + f.name;
  return sys;
}

}  // namespace spou
