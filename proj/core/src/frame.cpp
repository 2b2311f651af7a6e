#include "spou/frame.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "spou/errors.hpp"

namespace spou {

double FrameGeneratorPair::dual_target() const {
  double t = 1.0;
  for (int i = 0; i < dim(); ++i) t *= b;
  return t;
}

namespace {

void require_annular(const ScalarField& psi) {
  if (!psi.support || !(psi.support->r_lo > 0.0) || !psi.support->bounded())
    throw input_error("frame estimators require a bounded annular frequency support");
}

// Integer translates k/b that can land inside the support ball of radius
// r_hi around a point of the same ball: ||k|| <= 2 r_hi b.
std::vector<std::vector<double>> overlapping_translates(int dim, double r_hi, double b,
                                                        Norm norm, int& k_abs_max) {
  std::vector<std::vector<double>> ks;
  const double bound = 2.0 * r_hi * b;
  k_abs_max = static_cast<int>(std::floor(bound + 1e-12));
  if (k_abs_max < 1) return ks;
  if (k_abs_max > 64) throw input_error("translation overlap range too large for enumeration");
  std::vector<int> k(dim, -k_abs_max);
  while (true) {
    std::vector<double> kd(dim);
    bool zero = true;
    for (int i = 0; i < dim; ++i) {
      kd[i] = k[i];
      if (k[i] != 0) zero = false;
    }
    if (!zero && vec_norm(kd, norm) <= bound + 1e-12) ks.push_back(kd);
    int i = 0;
    for (; i < dim; ++i) {
      if (++k[i] <= k_abs_max) break;
      k[i] = -k_abs_max;
    }
    if (i == dim) break;
  }
  return ks;
}

struct GridAccumulator {
  double a_min = std::numeric_limits<double>::infinity();
  double b_max = 0.0;
};

GridAccumulator scan_bounds(const ScalarField& psi, const SquareMatrix& freq_m, double b,
                            const GridSpec& grid, const TruncationPolicy& policy,
                            int& k_abs_max) {
  require_annular(psi);
  if (!(b > 0.0)) throw input_error("translation step b must be positive");
  const int d = freq_m.dim();
  if (psi.dim() != d) throw input_error("generator and dilation dimension mismatch");

  DilationOrbit orbit(freq_m, psi.support->norm, policy);
  const auto ks = overlapping_translates(d, psi.support->r_hi, b, psi.support->norm, k_abs_max);
  const auto pts = make_grid(grid, d);

  double bd = 1.0;
  for (int i = 0; i < d; ++i) bd *= b;

  GridAccumulator acc;
  std::vector<double> shifted(d);
  for (const auto& gamma : pts) {
    const double gnorm = vec_norm(gamma, psi.support->norm);
    if (gnorm == 0.0) continue;
    const auto w = orbit.window(gnorm, *psi.support);
    double sq = 0.0, cross = 0.0;
    orbit.visit(gamma, w, [&](int, std::span<const double> x) {
      const double a = psi(x);
      if (a == 0.0) return;
      sq += a * a;
      for (const auto& k : ks) {
        for (int i = 0; i < d; ++i) shifted[i] = x[i] - k[i] / b;
        const double other = psi(shifted);
        if (other != 0.0) cross += std::abs(a * other);
      }
    });
    acc.a_min = std::min(acc.a_min, (sq - cross) / bd);
    acc.b_max = std::max(acc.b_max, (sq + cross) / bd);
  }
  if (!std::isfinite(acc.a_min)) acc.a_min = 0.0;
  return acc;
}

}  // namespace

double bessel_bound_estimate(const ScalarField& psi_hat, const SquareMatrix& freq_dilation,
                             double b, const GridSpec& grid, const TruncationPolicy& policy) {
  int k_abs_max = 0;
  return scan_bounds(psi_hat, freq_dilation, b, grid, policy, k_abs_max).b_max;
}

FrameBoundEstimate frame_bounds(const ScalarField& psi_hat, const SquareMatrix& freq_dilation,
                                double b, const GridSpec& grid, const TruncationPolicy& policy) {
  FrameBoundEstimate est;
  const auto acc = scan_bounds(psi_hat, freq_dilation, b, grid, policy, est.k_abs_max);
  est.A_est = acc.a_min;
  est.B_est = acc.b_max;
  est.grid_spec = grid.describe();
  est.frame_certified_on_grid = est.A_est > 0.0;
  est.notes = est.frame_certified_on_grid
                  ? "grid estimate (ess-inf/ess-sup approximated by grid min/max)"
                  : "frame property not certified on grid (A_est <= 0)";
  return est;
}

FrameGeneratorPair build_spline_dual_pair(int n, double c, double b) {
  if (n < 2) throw input_error("spline dual pair needs order n >= 2");
  // c^{n-1} by repeated multiplication, consistent with the knot array
  double c_pow = 1.0;
  for (int i = 0; i < n - 1; ++i) c_pow *= c;
  if (!(b > 0.0) || b > c_pow / 2.0 + 1e-15)
    throw input_error("translation step must satisfy 0 < b <= c^{n-1}/2");

  auto h = std::make_shared<PiecewiseEvenSpline>(build_spline(n, c));
  const double q_prev = build_spline(n - 1, c).integral();

  FrameGeneratorPair pair;
  pair.kind = "spline-dual";
  pair.spline_order = n;
  pair.spline_ratio = c;
  pair.b = b;
  pair.freq_dilation = SquareMatrix::scalar(1, c);
  pair.norm = Norm::euclidean;

  pair.psi_hat = as_field(*h);
  pair.psi_support = *pair.psi_hat.support;

  const double scale = b / (q_prev * q_prev);
  pair.psi_dual_hat = ScalarField::real(1, [h, scale, c, n](std::span<const double> x) {
    double acc = 0.0;
    double pw = 1.0;
    acc += (*h)(x[0]);
    for (int j = 1; j <= n - 1; ++j) {
      pw *= c;
      acc += (*h)(pw * x[0]) + (*h)(x[0] / pw);
    }
    return scale * acc;
  });
  // union over |j| <= n-1 of the dilated supports [c^{n-j}, c^{-j}]
  const double knot_lo = h->knots().front();      // c^n
  pair.psi_dual_support = Annulus{knot_lo * c_pow, 1.0 / c_pow, Norm::euclidean};
  pair.psi_dual_hat.support = pair.psi_dual_support;
  check_declared_support(pair.psi_dual_hat);

  pair.r_eff = 1.0 / c_pow;  // max(1, c^{-(n-1)})
  pair.support_disjointness_route = 2.0 * pair.b * pair.r_eff <= 1.0 + 1e-12;
  pair.plateau_value = b / q_prev;
  return pair;
}

IndexSetJ compute_index_set(const SquareMatrix& freq_m, double R, double R1, Norm norm) {
  if (!(R1 > 0.0) || !(R1 <= R)) throw input_error("index set needs 0 < R1 <= R");
  const auto cert = is_expanding(freq_m, norm);
  if (!cert.is_expanding)
    throw input_error("index set computation requires an expanding dilation");

  const double mu1 = operator_norm(freq_m, norm);
  const double rho_lo = R1 / mu1;  // inner support radius of the generator

  IndexSetJ out;
  bool any = false;
  // overlap test: the j-th power can place the support annulus over itself
  // iff lambda_j rho_lo <= R and mu_j R >= rho_lo
  auto overlaps = [&](const PowerBounds& pb) {
    return pb.lambda * rho_lo <= R + 1e-12 && pb.mu * R >= rho_lo - 1e-12;
  };
  int consecutive_out;
  for (int dir : {+1, -1}) {
    consecutive_out = 0;
    for (int k = dir > 0 ? 0 : 1; k <= kPowerIndexCap; ++k) {
      const int j = dir * k;
      const auto pb = singular_interval(freq_m, j, norm);
      IndexSetJ::Witness w;
      w.j = j;
      w.lambda = pb.lambda;
      w.mu = pb.mu;
      w.image_lo = rho_lo / pb.mu;
      w.image_hi = R / pb.lambda;
      w.overlaps = overlaps(pb);
      if (w.overlaps) {
        out.j_min = std::min(out.j_min, j);
        out.j_max = std::max(out.j_max, j);
        any = true;
        consecutive_out = 0;
      } else {
        ++consecutive_out;
      }
      out.witness.push_back(w);
      // expanding dilations push the gains monotonely past the thresholds;
      // a run of misses means the scan is done in this direction
      if (consecutive_out >= 8) break;
      if (k == kPowerIndexCap)
        throw input_error(
            "index-set scan did not close; dilation does not appear to be expanding");
    }
  }
  if (!any) throw input_error("index set came out empty; generator support is degenerate");
  std::sort(out.witness.begin(), out.witness.end(),
            [](const auto& a, const auto& b) { return a.j < b.j; });
  return out;
}

FrameGeneratorPair build_radial_dual_pair(const RadialProfile& r, const SquareMatrix& m,
                                          std::optional<double> b, Norm norm) {
  RadialProfile prof = r;
  prof.validate();
  if (!(prof.plateau_radius > 0.0))
    throw input_error("radial dual pair requires a plateau profile (R1 > 0)");
  if (!std::isfinite(prof.support_radius))
    throw input_error("radial dual pair requires compact profile support");
  if (!prof.monotone_decreasing)
    throw input_error("radial dual pair requires a decreasing profile");

  const SquareMatrix t = m.transposed();
  const auto cert = is_expanding(t, norm);
  if (!cert.is_expanding)
    throw input_error("build_radial_dual_pair refused: matrix is not expanding");
  if (!cert.norm_monotone)
    throw input_error(
        "build_radial_dual_pair refused: ||x|| <= ||M^T x|| fails (norm-monotonicity "
        "violated), so the plateau construction is unavailable");

  const int d = m.dim();
  const double R = prof.support_radius;
  const double R1 = prof.plateau_radius;
  const double mu1 = operator_norm(t, norm);

  FrameGeneratorPair pair;
  pair.kind = "radial-dual";
  pair.freq_dilation = t;
  pair.space_matrix = m;
  pair.profile = prof;
  pair.norm = norm;

  auto rf = prof.r;
  SquareMatrix tt = t;
  pair.psi_hat = ScalarField::real(d, [rf, tt, norm, d](std::span<const double> x) {
    std::vector<double> tx(d);
    tt.apply(x, tx);
    return rf(vec_norm(x, norm)) - rf(vec_norm(tx, norm));
  });
  pair.psi_support = Annulus{R1 / mu1, R, norm};
  pair.psi_hat.support = pair.psi_support;
  check_declared_support(pair.psi_hat);

  IndexSetJ jset = compute_index_set(t, R, R1, norm);
  double lambda_min = std::numeric_limits<double>::infinity();
  double mu_max = 0.0;
  for (const auto& w : jset.witness) {
    if (w.j < jset.j_min || w.j > jset.j_max) continue;
    lambda_min = std::min(lambda_min, w.lambda);
    mu_max = std::max(mu_max, w.mu);
  }
  pair.index_set = jset;
  pair.r_eff = R / lambda_min;

  const double b_max = 1.0 / (2.0 * pair.r_eff);
  if (b && (*b > b_max + 1e-15 || !(*b > 0.0)))
    throw input_error("translation step exceeds the admissible bound (2 R max lambda_j^{-1})^{-1}");
  pair.b = b.value_or(b_max);

  // psi_dual_hat = b^d sum_{j in J} psi_hat((M^T)^j x): precompute the powers
  std::vector<SquareMatrix> powers;
  for (int j = jset.j_min; j <= jset.j_max; ++j)
    powers.push_back(j == 0 ? SquareMatrix::identity(d)
                            : [&] {
                                SquareMatrix base = j > 0 ? t : t.inverse();
                                SquareMatrix p = base;
                                for (int k = 1; k < std::abs(j); ++k) p = p * base;
                                return p;
                              }());
  double bd = 1.0;
  for (int i = 0; i < d; ++i) bd *= pair.b;
  ScalarField psi = pair.psi_hat;
  pair.psi_dual_hat = ScalarField::real(d, [psi, powers, bd, d](std::span<const double> x) {
    std::vector<double> px(d);
    double acc = 0.0;
    for (const auto& p : powers) {
      p.apply(x, px);
      acc += psi(px);
    }
    return bd * acc;
  });
  pair.psi_dual_support =
      Annulus{(R1 / mu1) / mu_max, pair.r_eff, norm};
  pair.psi_dual_hat.support = pair.psi_dual_support;
  check_declared_support(pair.psi_dual_hat);

  pair.plateau_value = bd;
  pair.support_disjointness_route = 2.0 * pair.b * pair.r_eff <= 1.0 + 1e-12;

  // plateau identity sum_{j in J} psi_hat((M^T)^j x) = 1 on supp psi_hat,
  // spot-checked on a sample of the support
  const GridSpec probe{pair.psi_support.r_lo * 1.0000001, R * 0.9999999, 64, 16, 0x5CA1E, true};
  for (const auto& gamma : make_grid(probe, d)) {
    if (std::abs(pair.psi_hat(gamma)) < 1e-14) continue;
    std::vector<double> px(d);
    double s = 0.0;
    for (const auto& p : powers) {
      p.apply(gamma, px);
      s += psi(px);
    }
    if (std::abs(s - 1.0) > 1e-8)
      throw std::runtime_error("index-set plateau identity failed its spot check");
  }
  return pair;
}

DualVerifyReport verify_dual_relation(const FrameGeneratorPair& pair, const GridSpec& grid,
                                      const TruncationPolicy& policy, bool collect_rows) {
  require_annular(pair.psi_hat);
  const int d = pair.dim();
  DilationOrbit orbit(pair.freq_dilation, pair.psi_hat.support->norm, policy);
  const auto pts = make_grid(grid, d);
  const double target = pair.dual_target();

  DualVerifyReport rep;
  rep.base.check_name = "dual-sum = b^d";
  rep.base.tolerance = 1e-10;
  rep.base.grid_spec = grid.describe();
  rep.support_check_passed = 2.0 * pair.b * pair.r_eff <= 1.0 + 1e-12;
  rep.m_nonzero_route = rep.support_check_passed
                            ? "nonzero translates vanish by support disjointness (2 b R_eff <= 1)"
                            : "m != 0 condition not established (2 b R_eff > 1)";

  for (const auto& gamma : pts) {
    const double gnorm = vec_norm(gamma, pair.psi_hat.support->norm);
    if (gnorm == 0.0) {
      ++rep.base.n_skipped;
      continue;
    }
    const auto w = orbit.window(gnorm, *pair.psi_hat.support);
    double dual = 0.0, sq = 0.0;
    int n_terms = 0;
    orbit.visit(gamma, w, [&](int, std::span<const double> x) {
      const double a = pair.psi_hat(x);
      if (a == 0.0) return;
      dual += a * pair.psi_dual_hat(x);
      sq += a * a;
      ++n_terms;
    });
    const double dev = std::abs(dual - target);
    ++rep.base.n_samples;
    if (!w.certified) ++rep.base.n_uncertified;
    if (dev > rep.base.max_deviation) {
      rep.base.max_deviation = dev;
      rep.base.argmax_point = gamma;
    }
    // plateau: wherever psi_hat is materially nonzero, psi_dual_hat must sit
    // at its constant value
    if (std::abs(pair.psi_hat(gamma)) > 1e-13) {
      rep.plateau_max_dev = std::max(
          rep.plateau_max_dev, std::abs(pair.psi_dual_hat(gamma) - pair.plateau_value));
    }
    if (collect_rows) {
      SampleRow row;
      row.gamma = gamma;
      row.sum = dual;
      row.deviation = dev;
      row.n_terms = n_terms;
      row.sq_sum = sq;
      rep.base.rows.push_back(std::move(row));
    }
  }
  rep.base.route_notes = rep.m_nonzero_route;
  rep.base.finalize();
  return rep;
}

}  // namespace spou
