#pragma once

#include <optional>
#include <span>
#include <vector>

namespace spou {

enum class Norm { euclidean, max };

// Norm of a coordinate vector.
double vec_norm(std::span<const double> x, Norm norm);

/// Small dense real square matrix (row-major). Dimensions stay tiny
/// (paper-scale, d <= 8), so everything is a direct O(d^3) method.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(int dim) : dim_(dim), a_(static_cast<size_t>(dim) * dim, 0.0) {}
  SquareMatrix(std::initializer_list<std::initializer_list<double>> rows);

  static SquareMatrix identity(int dim);
  static SquareMatrix scalar(int dim, double value);  // value * I
  static SquareMatrix from_rows(const std::vector<std::vector<double>>& rows);

  int dim() const { return dim_; }
  double at(int i, int j) const { return a_[static_cast<size_t>(i) * dim_ + j]; }
  double& at(int i, int j) { return a_[static_cast<size_t>(i) * dim_ + j]; }
  const std::vector<double>& data() const { return a_; }

  bool all_finite() const;
  double max_abs_entry() const;

  SquareMatrix transposed() const;
  SquareMatrix operator*(const SquareMatrix& rhs) const;

  void apply(std::span<const double> in, std::span<double> out) const;
  std::vector<double> apply(std::span<const double> in) const;

  // LU with partial pivoting.
  double determinant() const;
  // Gauss-Jordan with partial pivoting; throws input_error when |det| falls
  // under the singularity tolerance 1e-12 * (max |entry|)^d.
  SquareMatrix inverse() const;

  double det_tolerance() const;

 private:
  int dim_ = 0;
  std::vector<double> a_;
};

// All singular values via one-sided Jacobi (ascending).
std::vector<double> singular_values(const SquareMatrix& m);

// Induced operator norm: euclidean -> sigma_max, max -> max abs row sum.
double operator_norm(const SquareMatrix& m, Norm norm);
// Smallest gain min_{x != 0} ||Mx||/||x||; 0 for singular matrices.
double min_gain(const SquareMatrix& m, Norm norm);

// Spectral radius. Exact via the characteristic polynomial for d <= 2;
// otherwise Gelfand's formula ||M^N||^(1/N) evaluated by normalized repeated
// squaring with a successive-estimate stopping rule (cap 64 squarings).
double spectral_radius(const SquareMatrix& m);

struct GrowthConstants {
  double C;      // in (0, 1]; sampled witness, not a proof
  double alpha;  // > 1
};

struct ExpansionCertificate {
  bool is_expanding = false;
  double spectral_radius_of_inverse = 0.0;
  bool norm_monotone = false;  // ||x|| <= ||Mx|| for all x, in `norm`
  std::optional<GrowthConstants> growth;
  Norm norm = Norm::euclidean;
  bool growth_constant_is_empirical = true;
};

// Classifies M as expanding (all eigenvalues strictly outside the unit
// circle, tested as rho(M^-1) < 1 - 1e-9) and fits growth constants
// ||M^N x|| >= C alpha^N ||x|| by sampling unit vectors.
ExpansionCertificate is_expanding(const SquareMatrix& m, Norm norm = Norm::euclidean);

struct PowerBounds {
  int j = 0;
  double lambda = 1.0;  // lower gain of M^j
  double mu = 1.0;      // upper gain of M^j
};

inline constexpr int kPowerIndexCap = 512;

// Two-sided gain interval for M^j: lambda_j ||x|| <= ||M^j x|| <= mu_j ||x||.
// Euclidean: extreme singular values of the explicitly formed power.
// Max-norm: row-sum operator norms of the power and its inverse.
PowerBounds singular_interval(const SquareMatrix& m, int j, Norm norm = Norm::euclidean,
                              int j_cap = kPowerIndexCap);

}  // namespace spou
