#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spou/dilation.hpp"
#include "spou/field.hpp"
#include "spou/grid.hpp"
#include "spou/matrix.hpp"
#include "spou/report.hpp"
#include "spou/spline.hpp"

namespace spou {

/// Finite set of dilation indices whose generator terms can meet the
/// generator's own support; always contains 0.
struct IndexSetJ {
  int j_min = 0;
  int j_max = 0;
  struct Witness {
    int j;
    double lambda, mu;        // gain interval of the j-th transpose power
    double image_lo, image_hi;  // where that power can place the support
    bool overlaps;
  };
  std::vector<Witness> witness;
};

/// Frequency-domain generator pair (psi_hat, psi_dual_hat) with the
/// frequency-side dilation matrix (transpose powers of the spatial matrix, or
/// the scalar ratio as a 1x1), translation step b and support certificates.
struct FrameGeneratorPair {
  ScalarField psi_hat;
  ScalarField psi_dual_hat;
  SquareMatrix freq_dilation;
  double b = 0.0;
  double r_eff = 0.0;  // both supports lie in the ball of this radius
  Annulus psi_support;
  Annulus psi_dual_support;
  bool support_disjointness_route = false;  // 2 b r_eff <= 1
  double plateau_value = 0.0;               // psi_dual_hat on supp psi_hat
  std::string kind;                         // "spline-dual" | "radial-dual"
  Norm norm = Norm::euclidean;

  // reconstruction parameters (serialization)
  int spline_order = 0;
  double spline_ratio = 0.0;
  std::optional<RadialProfile> profile;
  std::optional<SquareMatrix> space_matrix;
  std::optional<IndexSetJ> index_set;

  int dim() const { return freq_dilation.dim(); }
  double dual_target() const;  // b^d
};

struct FrameBoundEstimate {
  double A_est = 0.0;
  double B_est = 0.0;
  std::string grid_spec;
  int k_abs_max = 0;               // extent of the translation sum actually used
  bool frame_certified_on_grid = false;  // A_est > 0
  std::string notes;
};

// Upper (Bessel) grid estimate:
//   B = b^{-d} sup_gamma sum_j sum_k |psi((M^T)^j g) psi((M^T)^j g - k/b)|.
// The j-sum is finite through the support window; only k with
// ||k|| <= 2 r_hi b can overlap.
double bessel_bound_estimate(const ScalarField& psi_hat, const SquareMatrix& freq_dilation,
                             double b, const GridSpec& grid,
                             const TruncationPolicy& policy = {});

// Both bounds; A subtracts the k != 0 cross terms and is flagged when it
// fails to stay positive on the grid.
FrameBoundEstimate frame_bounds(const ScalarField& psi_hat, const SquareMatrix& freq_dilation,
                                double b, const GridSpec& grid,
                                const TruncationPolicy& policy = {});

// 1-D pair: psi_hat = h_n, psi_dual_hat = (b/Q_{n-1}^2) sum_{|j| <= n-1}
// h_n(c^j gamma). Requires 0 < b <= c^{n-1}/2.
FrameGeneratorPair build_spline_dual_pair(int n, double c, double b);

// Minimal conservative index range J with
// sum_{j in J} psi((M^T)^j gamma) = 1 on supp psi (plateau profiles).
// `freq_m` is the frequency-side matrix (the transpose of the spatial one).
IndexSetJ compute_index_set(const SquareMatrix& freq_m, double R, double R1, Norm norm);

// Radial pair for a plateau profile: psi_hat = r(||g||) - r(||M^T g||),
// psi_dual_hat = b^d sum_{j in J} psi_hat((M^T)^j g). Without b the largest
// admissible value (2 R max_{j in J} lambda_j^{-1})^{-1} is used.
FrameGeneratorPair build_radial_dual_pair(const RadialProfile& r, const SquareMatrix& m,
                                          std::optional<double> b = std::nullopt,
                                          Norm norm = Norm::euclidean);

struct DualVerifyReport {
  VerificationReport base;      // deviation of the dual sum from b^d
  bool support_check_passed = false;
  std::string m_nonzero_route;  // how the nonzero-translate conditions were settled
  double plateau_max_dev = 0.0; // psi_dual_hat vs plateau value on supp psi_hat
};

DualVerifyReport verify_dual_relation(const FrameGeneratorPair& pair, const GridSpec& grid,
                                      const TruncationPolicy& policy = {},
                                      bool collect_rows = false);

}  // namespace spou
