#include "spou/field.hpp"

#include <cmath>
#include <random>

#include "spou/errors.hpp"
#include "spou/grid.hpp"

namespace spou {

double ScalarField::operator()(std::span<const double> x) const {
  if (const auto* f = std::get_if<RealFn>(&fn_)) return (*f)(x);
  if (std::holds_alternative<ComplexFn>(fn_))
    throw input_error("complex-valued field used where a real value is required");
  throw input_error("empty scalar field");
}

std::complex<double> ScalarField::eval_complex(std::span<const double> x) const {
  if (const auto* f = std::get_if<RealFn>(&fn_)) return {(*f)(x), 0.0};
  if (const auto* f = std::get_if<ComplexFn>(&fn_)) return (*f)(x);
  throw input_error("empty scalar field");
}

void check_declared_support(const ScalarField& f, int samples_per_shell, unsigned seed) {
  if (!f.support) return;
  const Annulus& a = *f.support;
  const auto dirs = sphere_directions(f.dim(), std::max(4, samples_per_shell / 4), seed);
  std::vector<double> x(f.dim());
  auto probe = [&](double radius) {
    for (const auto& d : dirs) {
      for (int i = 0; i < f.dim(); ++i) x[i] = radius * d[i];
      // normalize to the declared norm so the probe radius is exact
      const double n = vec_norm(x, a.norm);
      if (n > 0.0) {
        for (double& v : x) v *= radius / n;
      }
      if (std::abs(f.eval_complex(x)) > 1e-12)
        throw input_error("field does not vanish outside its declared support");
    }
  };
  if (a.r_lo > 0.0) {
    for (double s : {0.9, 0.5, 0.1, 0.01}) probe(a.r_lo * s);
  }
  if (a.bounded()) {
    for (double s : {1.05, 1.5, 4.0, 64.0}) probe(a.r_hi * s);
  }
}

void RadialProfile::validate() {
  if (!r) throw input_error("radial profile has no evaluator");
  if (std::abs(r(0.0) - 1.0) > 1e-12) throw input_error("radial profile must satisfy r(0) = 1");
  const double hi = std::isfinite(support_radius) ? support_radius * 1.25 : 16.0;
  const int n = 512;
  double prev = r(0.0);
  sampled_continuous = true;
  for (int i = 1; i <= n; ++i) {
    const double s = hi * i / n;
    const double v = r(s);
    if (monotone_decreasing && v > prev + 1e-12)
      throw input_error("radial profile claims monotone decreasing but increases");
    if (std::abs(v - prev) > 0.5) sampled_continuous = false;  // jump on a fine grid
    prev = v;
  }
  if (std::isfinite(support_radius)) {
    for (double s : {1.0001, 1.01, 1.5, 8.0}) {
      if (std::abs(r(support_radius * s)) > 1e-12)
        throw input_error("radial profile does not vanish beyond its support radius");
    }
  }
}

namespace profiles {

RadialProfile gaussian() {
  RadialProfile p;
  p.r = [](double s) { return std::exp(-s * s); };
  p.monotone_decreasing = true;
  p.name = "gaussian";
  p.validate();
  return p;
}

RadialProfile exp_abs() {
  RadialProfile p;
  p.r = [](double s) { return std::exp(-s); };
  p.monotone_decreasing = true;
  p.name = "exp-abs";
  p.validate();
  return p;
}

RadialProfile plateau_linear(double r1, double r) {
  if (!(r1 > 0.0) || !(r > r1)) throw input_error("plateau-linear requires 0 < R1 < R");
  RadialProfile p;
  p.r = [r1, r](double s) {
    if (s <= r1) return 1.0;
    if (s >= r) return 0.0;
    return (r - s) / (r - r1);
  };
  p.support_radius = r;
  p.plateau_radius = r1;
  p.monotone_decreasing = true;
  p.name = "plateau-linear";
  p.params = {r1, r};
  p.validate();
  return p;
}

RadialProfile step(double r) {
  if (!(r > 0.0)) throw input_error("step profile requires R > 0");
  RadialProfile p;
  p.r = [r](double s) { return s <= r ? 1.0 : 0.0; };
  p.support_radius = r;
  p.plateau_radius = r;
  p.monotone_decreasing = true;
  p.name = "step";
  p.params = {r};
  p.validate();
  return p;
}

RadialProfile from_spec(const std::string& spec) {
  std::string name = spec;
  std::vector<double> args;
  if (auto pos = spec.find(':'); pos != std::string::npos) {
    name = spec.substr(0, pos);
    std::string rest = spec.substr(pos + 1);
    size_t start = 0;
    while (start <= rest.size()) {
      const size_t end = rest.find(':', start);
      const std::string tok = rest.substr(start, end == std::string::npos ? end : end - start);
      if (!tok.empty()) {
        size_t used = 0;
        args.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw input_error("bad numeric parameter in profile spec: " + tok);
      }
      if (end == std::string::npos) break;
      start = end + 1;
    }
  }
  if (name == "gaussian") return gaussian();
  if (name == "exp-abs") return exp_abs();
  if (name == "plateau-linear") {
    if (args.size() != 2) throw input_error("plateau-linear:R1:R expects two parameters");
    return plateau_linear(args[0], args[1]);
  }
  if (name == "step") {
    if (args.size() != 1) throw input_error("step:R expects one parameter");
    return step(args[0]);
  }
  throw input_error("unknown profile: " + name);
}

}  // namespace profiles

ScalarField radial_field(const RadialProfile& p, int dim, Norm norm) {
  if (dim < 1) throw input_error("field dimension must be >= 1");
  auto r = p.r;
  ScalarField f = ScalarField::real(
      dim, [r, norm](std::span<const double> x) { return r(vec_norm(x, norm)); });
  if (std::isfinite(p.support_radius))
    f.support = Annulus{0.0, p.support_radius, norm};
  f.sup_bound = 1.0;
  return f;
}

}  // namespace spou
