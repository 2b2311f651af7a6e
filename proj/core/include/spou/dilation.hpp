#pragma once

#include <complex>
#include <functional>
#include <mutex>
#include <span>
#include <vector>

#include "spou/field.hpp"
#include "spou/matrix.hpp"

namespace spou {

struct TruncationPolicy {
  double tail_tol = 1e-12;
  int j_abs_max = 200;
};

/// Walks the orbit x_j = M^j x and certifies two-sided index windows outside
/// which the orbit cannot meet a given annulus. Certification uses the
/// submultiplicative gain envelopes: once some power has min-gain > 1 the
/// orbit escapes outward at a geometric rate, and once some power has
/// max-gain < 1 it collapses inward; both follow from the cached per-power
/// bounds alone.
class DilationOrbit {
 public:
  DilationOrbit(SquareMatrix m, Norm norm, TruncationPolicy policy = {});

  struct Window {
    int j_min = 0;
    int j_max = -1;  // empty when j_min > j_max
    bool certified = false;
    bool empty() const { return j_min > j_max; }
  };

  // Smallest certified window containing every j with M^j x possibly inside
  // the annulus, for ||x|| = gamma_norm. Falls back to the policy cap
  // (uncertified) when neither envelope applies.
  Window window(double gamma_norm, const Annulus& a) const;

  void visit(std::span<const double> gamma, const Window& w,
             const std::function<void(int j, std::span<const double> x)>& fn) const;

  const SquareMatrix& matrix() const { return m_; }
  const SquareMatrix& inverse_matrix() const { return minv_; }
  Norm norm() const { return norm_; }
  const TruncationPolicy& policy() const { return policy_; }
  PowerBounds bounds(int j) const;  // cached gain interval of M^j

 private:
  struct Side {
    std::vector<PowerBounds> tab;    // tab[k] bounds the k-th power of the base
    SquareMatrix power_cache;        // last formed power
    int first_gain = -1;             // smallest k >= 1 with lambda_k > 1
    int first_shrink = -1;           // smallest k >= 1 with mu_k < 1
    double prefix_min_lambda = 1.0;  // min lambda over [0, search cap]
    double prefix_max_mu = 1.0;      // max mu over [0, search cap]
    bool overflowed = false;
  };

  void grow(Side& s, const SquareMatrix& base, int upto) const;
  // Smallest K with all k >= K certified outside [r_lo, r_hi]; -1 if no
  // envelope applies.
  int stop_index(const Side& s, double gnorm, double r_lo, double r_hi) const;

  SquareMatrix m_, minv_;
  Norm norm_;
  TruncationPolicy policy_;
  mutable Side up_, down_;
  mutable std::mutex mu_;
};

struct DilationSumResult {
  std::complex<double> sum{0.0, 0.0};
  int n_terms = 0;
  int j_min = 0, j_max = -1;
  bool certified = false;
  double tail_bound = 0.0;
  std::string route = "none";
};

}  // namespace spou
