#include "spou/pou.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spou/errors.hpp"

namespace spou {

namespace {

bool annulus_certifiable(const ScalarField& g) {
  return g.support && g.support->r_lo > 0.0 && g.support->bounded();
}

}  // namespace

DilationEngine::DilationEngine(PartitionSystem sys) : sys_(std::move(sys)) {
  if (!sys_.g.valid()) throw input_error("partition system has no generator");
  if (sys_.g.dim() != sys_.M.dim()) throw input_error("generator and matrix dimension mismatch");
  orbit_ = std::make_shared<DilationOrbit>(sys_.M, sys_.norm, sys_.truncation);
}

DilationSumResult DilationEngine::sum(std::span<const double> gamma) const {
  DilationSumResult res;
  const double gnorm = vec_norm(gamma, sys_.norm);
  if (gnorm == 0.0) {
    res.route = "skipped-origin";
    return res;
  }
  const double tol = sys_.truncation.tail_tol;

  if (annulus_certifiable(sys_.g)) {
    const auto w = orbit_->window(gnorm, *sys_.g.support);
    res.route = "annulus-exact";
    res.certified = w.certified;
    res.j_min = w.j_min;
    res.j_max = w.j_max;
    orbit_->visit(gamma, w, [&](int, std::span<const double> x) {
      res.sum += sys_.g.eval_complex(x);
      ++res.n_terms;
    });
    return res;
  }

  if (sys_.phi) {
    // Partial sums telescope: the omitted tails equal the distance of phi to
    // its orbit limits at the cut points, so they are evaluated, not guessed.
    res.route = "telescoping-tail";
    const auto& wit = *sys_.phi;
    const int cap = sys_.truncation.j_abs_max;
    const int d = sys_.M.dim();
    std::vector<double> cur(gamma.begin(), gamma.end()), next(d);
    double tail_up = 0.0, tail_down = 0.0;
    bool ok_up = false, ok_down = false;
    for (int j = 0; j <= cap; ++j) {
      res.sum += sys_.g.eval_complex(cur);
      ++res.n_terms;
      res.j_max = j;
      sys_.M.apply(cur, next);
      cur.swap(next);
      tail_up = std::abs(wit.phi(cur) - wit.limit_forward);
      if (tail_up <= tol / 2) {
        ok_up = true;
        break;
      }
    }
    cur.assign(gamma.begin(), gamma.end());
    for (int j = -1; j >= -cap; --j) {
      orbit_->inverse_matrix().apply(cur, next);
      cur.swap(next);
      res.sum += sys_.g.eval_complex(cur);
      ++res.n_terms;
      res.j_min = j;
      tail_down = std::abs(wit.phi(cur) - wit.limit_backward);
      if (tail_down <= tol / 2) {
        ok_down = true;
        break;
      }
    }
    res.certified = ok_up && ok_down;
    res.tail_bound = tail_up + tail_down;
    return res;
  }

  // No certificate available: stop after a run of negligible terms.
  res.route = "heuristic";
  const int cap = sys_.truncation.j_abs_max;
  const int d = sys_.M.dim();
  std::vector<double> cur(gamma.begin(), gamma.end()), next(d);
  int quiet = 0;
  for (int j = 0; j <= cap && quiet < 4; ++j) {
    const auto t = sys_.g.eval_complex(cur);
    res.sum += t;
    ++res.n_terms;
    res.j_max = j;
    quiet = std::abs(t) <= tol ? quiet + 1 : 0;
    sys_.M.apply(cur, next);
    cur.swap(next);
  }
  cur.assign(gamma.begin(), gamma.end());
  quiet = 0;
  for (int j = -1; j >= -cap && quiet < 4; --j) {
    orbit_->inverse_matrix().apply(cur, next);
    cur.swap(next);
    const auto t = sys_.g.eval_complex(cur);
    res.sum += t;
    ++res.n_terms;
    res.j_min = j;
    quiet = std::abs(t) <= tol ? quiet + 1 : 0;
  }
  res.certified = false;
  return res;
}

DilationSumResult DilationEngine::sum_squares(std::span<const double> gamma) const {
  DilationSumResult res;
  const double gnorm = vec_norm(gamma, sys_.norm);
  if (gnorm == 0.0) {
    res.route = "skipped-origin";
    return res;
  }
  const double tol = sys_.truncation.tail_tol;

  if (annulus_certifiable(sys_.g)) {
    const auto w = orbit_->window(gnorm, *sys_.g.support);
    res.route = "annulus-exact";
    res.certified = w.certified;
    res.j_min = w.j_min;
    res.j_max = w.j_max;
    orbit_->visit(gamma, w, [&](int, std::span<const double> x) {
      res.sum += std::norm(sys_.g.eval_complex(x));
      ++res.n_terms;
    });
    return res;
  }

  res.route = "heuristic";
  const int cap = sys_.truncation.j_abs_max;
  const int d = sys_.M.dim();
  std::vector<double> cur(gamma.begin(), gamma.end()), next(d);
  int quiet = 0;
  for (int j = 0; j <= cap && quiet < 4; ++j) {
    const double t = std::norm(sys_.g.eval_complex(cur));
    res.sum += t;
    ++res.n_terms;
    res.j_max = j;
    quiet = t <= tol * tol ? quiet + 1 : 0;
    sys_.M.apply(cur, next);
    cur.swap(next);
  }
  cur.assign(gamma.begin(), gamma.end());
  quiet = 0;
  for (int j = -1; j >= -cap && quiet < 4; --j) {
    orbit_->inverse_matrix().apply(cur, next);
    cur.swap(next);
    const double t = std::norm(sys_.g.eval_complex(cur));
    res.sum += t;
    ++res.n_terms;
    res.j_min = j;
    quiet = t <= tol * tol ? quiet + 1 : 0;
  }
  return res;
}

ScalarField g_from_phi(const ScalarField& phi, const SquareMatrix& m) {
  if (!phi.valid()) throw input_error("phi has no evaluator");
  if (phi.dim() != m.dim()) throw input_error("phi and matrix dimension mismatch");
  (void)m.inverse();  // invertibility precondition

  const int d = m.dim();
  ScalarField g;
  if (phi.is_real()) {
    ScalarField p = phi;
    SquareMatrix mm = m;
    g = ScalarField::real(d, [p, mm, d](std::span<const double> x) {
      std::vector<double> mx(d);
      mm.apply(x, mx);
      return p(x) - p(mx);
    });
  } else {
    ScalarField p = phi;
    SquareMatrix mm = m;
    g = ScalarField::complex_valued(d, [p, mm, d](std::span<const double> x) {
      std::vector<double> mx(d);
      mm.apply(x, mx);
      return p.eval_complex(x) - p.eval_complex(mx);
    });
  }
  if (phi.support && phi.support->bounded() && phi.support->r_lo == 0.0) {
    // Outside the ball both terms vanish provided the norm never shrinks.
    if (min_gain(m, phi.support->norm) >= 1.0 - 1e-12)
      g.support = Annulus{0.0, phi.support->r_hi, phi.support->norm};
  }
  return g;
}

ScalarField phi_from_g(const ScalarField& g, const SquareMatrix& m,
                       const TruncationPolicy& policy) {
  if (!g.valid()) throw input_error("g has no evaluator");
  if (g.dim() != m.dim()) throw input_error("g and matrix dimension mismatch");

  const bool annular = annulus_certifiable(g);
  bool expanding = false;
  try {
    expanding = is_expanding(m).is_expanding;
  } catch (const input_error&) {
    expanding = false;
  }
  const bool contracting = spectral_radius(m) < 1.0 - 1e-9;
  if (!annular && !expanding && !contracting)
    throw input_error(
        "phi_from_g refused: no convergence certificate (matrix neither expanding nor "
        "contracting, and g has no bounded annular support)");

  auto orbit = std::make_shared<DilationOrbit>(m, g.support ? g.support->norm : Norm::euclidean,
                                               policy);
  ScalarField gg = g;
  const int cap = policy.j_abs_max;
  const double tol = policy.tail_tol;
  const int d = m.dim();
  SquareMatrix mm = m;

  ScalarField phi = ScalarField::real(d, [orbit, gg, mm, cap, tol, d,
                                          annular](std::span<const double> x) {
    if (annular) {
      const double n = vec_norm(x, gg.support->norm);
      if (n == 0.0) return 0.0;
      const auto w = orbit->window(n, *gg.support);
      double acc = 0.0;
      if (!w.empty() && w.j_max >= 0) {
        DilationOrbit::Window wpos{std::max(0, w.j_min), w.j_max, w.certified};
        orbit->visit(x, wpos, [&](int, std::span<const double> y) { acc += gg(y); });
      }
      return acc;
    }
    std::vector<double> cur(x.begin(), x.end()), next(d);
    double acc = 0.0;
    int quiet = 0;
    for (int j = 0; j <= cap && quiet < 4; ++j) {
      const double t = gg(cur);
      acc += t;
      quiet = std::abs(t) <= tol ? quiet + 1 : 0;
      mm.apply(cur, next);
      cur.swap(next);
    }
    return acc;
  });
  if (!annular) phi.note = "tail truncation is heuristic (no support certificate)";
  if (!g.is_real()) {
    // complex generators keep a complex partial-sum evaluator
    ScalarField gc = g;
    SquareMatrix m2 = m;
    phi = ScalarField::complex_valued(d, [gc, m2, cap, tol, d](std::span<const double> x) {
      std::vector<double> cur(x.begin(), x.end()), next(d);
      std::complex<double> acc{0.0, 0.0};
      int quiet = 0;
      for (int j = 0; j <= cap && quiet < 4; ++j) {
        const auto t = gc.eval_complex(cur);
        acc += t;
        quiet = std::abs(t) <= tol ? quiet + 1 : 0;
        m2.apply(cur, next);
        cur.swap(next);
      }
      return acc;
    });
    phi.note = "tail truncation is heuristic (complex generator)";
  }
  return phi;
}

VerificationReport verify_partition(const PartitionSystem& sys,
                                    std::span<const std::vector<double>> samples,
                                    double tolerance, bool collect_rows) {
  DilationEngine engine(sys);
  VerificationReport rep;
  rep.check_name = "dilation-sum = target";
  rep.tolerance = tolerance;

  std::string routes;
  for (const auto& gamma : samples) {
    const double gnorm = vec_norm(gamma, sys.norm);
    if (gnorm == 0.0) {
      ++rep.n_skipped;
      continue;
    }
    const auto r = engine.sum(gamma);
    const double dev = std::abs(r.sum - std::complex<double>(sys.target_constant, 0.0));
    ++rep.n_samples;
    if (!r.certified) ++rep.n_uncertified;
    if (dev > rep.max_deviation) {
      rep.max_deviation = dev;
      rep.argmax_point = gamma;
    }
    if (routes.find(r.route) == std::string::npos) {
      if (!routes.empty()) routes += ",";
      routes += r.route;
    }
    if (collect_rows) {
      SampleRow row;
      row.gamma = gamma;
      row.sum = r.sum.real();
      row.deviation = dev;
      row.n_terms = r.n_terms;
      row.certified = r.certified;
      rep.rows.push_back(std::move(row));
    }
  }
  rep.route_notes = routes;
  if (rep.n_skipped) rep.route_notes += " (origin samples skipped)";
  rep.finalize();
  return rep;
}

PartitionSystem build_radial_pou(const RadialProfile& r, const SquareMatrix& m, Norm norm,
                                 bool require_nonnegativity) {
  RadialProfile prof = r;
  prof.validate();
  const auto cert = is_expanding(m, norm);
  if (!cert.is_expanding)
    throw input_error("build_radial_pou refused: matrix is not expanding");
  if (require_nonnegativity && !cert.norm_monotone)
    throw input_error(
        "build_radial_pou refused: nonnegativity requested but ||x|| <= ||Mx|| fails "
        "(norm-monotonicity violated)");

  const int d = m.dim();
  PartitionSystem sys;
  sys.M = m;
  sys.norm = norm;
  sys.certificate = cert;
  sys.target_constant = 1.0;

  auto rf = prof.r;
  SquareMatrix mm = m;
  sys.g = ScalarField::real(d, [rf, mm, norm, d](std::span<const double> x) {
    std::vector<double> mx(d);
    mm.apply(x, mx);
    return rf(vec_norm(x, norm)) - rf(vec_norm(mx, norm));
  });
  if (std::isfinite(prof.support_radius)) {
    const double mu1 = operator_norm(m, norm);
    const double lam1 = min_gain(m, norm);
    const double outer = prof.support_radius * std::max(1.0, 1.0 / lam1);
    const double inner = prof.plateau_radius > 0.0 ? prof.plateau_radius / mu1 : 0.0;
    sys.g.support = Annulus{inner, outer, norm};
    check_declared_support(sys.g);
  }
  sys.g.smoothness = prof.sampled_continuous ? "C^0" : "none";

  PhiWitness wit;
  wit.phi = radial_field(prof, d, norm);
  wit.limit_backward = 1.0;
  wit.limit_forward = 0.0;
  sys.phi = std::move(wit);

  sys.nonneg_guaranteed = cert.norm_monotone && prof.monotone_decreasing;
  sys.square_sum_lower_bounded = sys.nonneg_guaranteed && prof.sampled_continuous;
  sys.description = "radial-pou profile=" + prof.name;
  return sys;
}

std::pair<double, double> square_sum_bounds(const PartitionSystem& sys,
                                            std::span<const std::vector<double>> samples) {
  if (samples.empty()) throw input_error("square_sum_bounds needs a nonempty sample set");
  if (!sys.g.is_real())
    throw input_error("square_sum_bounds requires a real-valued generator");
  DilationEngine engine(sys);
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& gamma : samples) {
    if (vec_norm(gamma, sys.norm) == 0.0) continue;
    const double s = engine.sum_squares(gamma).sum.real();
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  if (!std::isfinite(lo)) throw input_error("square_sum_bounds: all samples were at the origin");
  if (sys.nonneg_guaranteed) {
    if (hi > 1.0 + 1e-12)
      throw std::runtime_error("square-sum upper bound exceeded 1 for a nonnegative partition");
    if (sys.square_sum_lower_bounded && !(lo > 0.0))
      throw std::runtime_error("square-sum lower bound hit zero for a continuous partition");
  }
  return {lo, hi};
}

BandRange default_band(const PartitionSystem& sys) {
  const double mu1 = operator_norm(sys.M, sys.norm);
  const double lam1 = min_gain(sys.M, sys.norm);
  double s = std::max(mu1, lam1 > 0.0 ? 1.0 / lam1 : 2.0);
  if (!(s > 1.0)) s = 2.0;
  return BandRange{1.0, s};
}

}  // namespace spou
