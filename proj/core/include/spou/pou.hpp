#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spou/dilation.hpp"
#include "spou/field.hpp"
#include "spou/matrix.hpp"
#include "spou/report.hpp"

namespace spou {

// Telescoping witness: g(x) = phi(x) - phi(Mx), with the orbit limits of phi
// recorded so truncation tails can be evaluated exactly.
struct PhiWitness {
  ScalarField phi;
  double limit_backward = 1.0;  // lim of phi(M^N x) as N -> -inf
  double limit_forward = 0.0;   // lim of phi(M^N x) as N -> +inf
};

/// A generator g together with the dilation matrix M and the constant its
/// dilation sum should equal (1 for partitions of unity, the integral of the
/// source function for transform outputs).
struct PartitionSystem {
  ScalarField g;
  SquareMatrix M;
  Norm norm = Norm::euclidean;
  TruncationPolicy truncation;
  double target_constant = 1.0;
  std::optional<ExpansionCertificate> certificate;
  std::optional<PhiWitness> phi;
  bool nonneg_guaranteed = false;
  bool square_sum_lower_bounded = false;
  std::string description;
};

/// Evaluates dilation sums for one system with cached power bounds.
/// Truncation routes, in order of preference:
///   annulus-exact   — finite certified window from the support annulus,
///   telescoping-tail — partial sum with tails evaluated through phi,
///   heuristic       — consecutive-small-term stop, never certified.
class DilationEngine {
 public:
  explicit DilationEngine(PartitionSystem sys);

  DilationSumResult sum(std::span<const double> gamma) const;
  DilationSumResult sum_squares(std::span<const double> gamma) const;

  const PartitionSystem& system() const { return sys_; }
  const DilationOrbit& orbit() const { return *orbit_; }

 private:
  PartitionSystem sys_;
  std::shared_ptr<DilationOrbit> orbit_;
};

// g(x) = phi(x) - phi(Mx); propagates a bounded support radius when the norm
// is monotone under M.
ScalarField g_from_phi(const ScalarField& phi, const SquareMatrix& m);

// Canonical telescoping companion phi(x) = sum_{j >= 0} g(M^j x), truncated
// with a certificate where the support annulus provides one. Refuses when
// neither M expanding/contracting nor an annular support certifies
// convergence.
ScalarField phi_from_g(const ScalarField& g, const SquareMatrix& m,
                       const TruncationPolicy& policy = {});

// Max deviation of the dilation sum from the target over the samples
// (origin samples are skipped with a note).
VerificationReport verify_partition(const PartitionSystem& sys,
                                    std::span<const std::vector<double>> samples,
                                    double tolerance = 1e-10, bool collect_rows = false);

// Partition of unity from a radial profile: g(x) = r(||x||) - r(||Mx||).
// Refuses non-expanding M; with require_nonnegativity also refuses matrices
// that fail ||x|| <= ||Mx||.
PartitionSystem build_radial_pou(const RadialProfile& r, const SquareMatrix& m, Norm norm,
                                 bool require_nonnegativity = false);

// Grid min/max of sum_j |g(M^j x)|^2. Real-valued g only.
std::pair<double, double> square_sum_bounds(const PartitionSystem& sys,
                                            std::span<const std::vector<double>> samples);

struct BandRange {
  double r_lo;
  double r_hi;
};

// One scale band [1, s] matched to the dilation strength of M; dilation sums
// are band-periodic, so verification grids can be restricted to it.
BandRange default_band(const PartitionSystem& sys);

}  // namespace spou
