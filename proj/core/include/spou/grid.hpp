#pragma once

#include <string>
#include <vector>

namespace spou {

// Deterministic sampling grids: log-spaced radii over one scale band crossed
// with a fixed direction set. One band suffices for dilation-periodic
// quantities; reports always echo the grid so estimates stay reproducible.
struct GridSpec {
  double r_lo = 1.0;
  double r_hi = 2.0;
  int n_radii = 4096;
  int n_directions = 64;       // d = 1 always uses {+1, -1}
  unsigned seed = 0x5CA1E;     // only used for d > 3 random directions
  bool log_spacing = true;

  std::string describe() const;
};

// Inclusive endpoints; log or linear spacing.
std::vector<double> spaced_radii(double lo, double hi, int n, bool log_spacing);

// Unit directions (euclidean): d=1 -> {+1,-1}; d=2 -> uniform angles;
// d=3 -> Fibonacci sphere; d>3 -> seeded Box-Muller normals, normalized.
std::vector<std::vector<double>> sphere_directions(int dim, int count, unsigned seed = 0x5CA1E);

std::vector<std::vector<double>> make_grid(const GridSpec& spec, int dim);

}  // namespace spou
