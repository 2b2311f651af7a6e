#include "spou/grid.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "spou/errors.hpp"

namespace spou {

std::string GridSpec::describe() const {
  char buf[160];
  std::snprintf(buf, sizeof buf, "band=[%.17g,%.17g] radii=%d dirs=%d spacing=%s seed=0x%X",
                r_lo, r_hi, n_radii, n_directions, log_spacing ? "log" : "lin", seed);
  return buf;
}

std::vector<double> spaced_radii(double lo, double hi, int n, bool log_spacing) {
  if (n < 1 || !(lo > 0.0 || !log_spacing) || !(hi >= lo))
    throw input_error("bad radius range for sampling grid");
  std::vector<double> out;
  out.reserve(n);
  if (n == 1) {
    out.push_back(lo);
    return out;
  }
  if (log_spacing) {
    const double ratio = std::log(hi / lo);
    for (int i = 0; i < n; ++i) out.push_back(lo * std::exp(ratio * i / (n - 1)));
  } else {
    for (int i = 0; i < n; ++i) out.push_back(lo + (hi - lo) * i / (n - 1));
  }
  return out;
}

std::vector<std::vector<double>> sphere_directions(int dim, int count, unsigned seed) {
  if (dim < 1) throw input_error("direction set needs dim >= 1");
  std::vector<std::vector<double>> dirs;
  if (dim == 1) {
    dirs.push_back({1.0});
    dirs.push_back({-1.0});
    return dirs;
  }
  count = std::max(count, 1);
  dirs.reserve(count);
  if (dim == 2) {
    for (int i = 0; i < count; ++i) {
      const double th = 2.0 * M_PI * i / count;
      dirs.push_back({std::cos(th), std::sin(th)});
    }
    return dirs;
  }
  if (dim == 3) {
    // Fibonacci sphere
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
      const double z = 1.0 - 2.0 * (i + 0.5) / count;
      const double rad = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double th = golden * i;
      dirs.push_back({rad * std::cos(th), rad * std::sin(th), z});
    }
    return dirs;
  }
  // Seeded Box-Muller keeps the deviates pinned to the generator, not to the
  // standard library's distribution implementation.
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  while (static_cast<int>(dirs.size()) < count) {
    std::vector<double> v(dim);
    double nn = 0.0;
    for (int i = 0; i < dim; ++i) {
      const double u1 = std::max(uni(rng), 1e-15), u2 = uni(rng);
      v[i] = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
      nn += v[i] * v[i];
    }
    nn = std::sqrt(nn);
    if (nn < 1e-8) continue;
    for (double& x : v) x /= nn;
    dirs.push_back(std::move(v));
  }
  return dirs;
}

std::vector<std::vector<double>> make_grid(const GridSpec& spec, int dim) {
  const auto radii = spaced_radii(spec.r_lo, spec.r_hi, spec.n_radii, spec.log_spacing);
  const int want = dim > 3 ? std::max(spec.n_directions, 256) : spec.n_directions;
  const auto dirs = sphere_directions(dim, want, spec.seed);
  std::vector<std::vector<double>> pts;
  pts.reserve(radii.size() * dirs.size());
  for (double r : radii)
    for (const auto& d : dirs) {
      std::vector<double> p(dim);
      for (int i = 0; i < dim; ++i) p[i] = r * d[i];
      pts.push_back(std::move(p));
    }
  return pts;
}

}  // namespace spou
