#include "spou/spline.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "spou/errors.hpp"

namespace spou {

namespace {

using Poly = std::vector<double>;  // monomial, ascending

double horner(const Poly& p, double x) {
  double v = 0.0;
  for (size_t i = p.size(); i-- > 0;) v = v * x + p[i];
  return v;
}

Poly derive(const Poly& p, int m) {
  Poly d = p;
  for (int k = 0; k < m; ++k) {
    if (d.size() <= 1) return {0.0};
    Poly nd(d.size() - 1);
    for (size_t i = 1; i < d.size(); ++i) nd[i - 1] = d[i] * static_cast<double>(i);
    d.swap(nd);
  }
  return d;
}

Poly antiderive(const Poly& p) {
  Poly a(p.size() + 1, 0.0);
  for (size_t i = 0; i < p.size(); ++i) a[i + 1] = p[i] / static_cast<double>(i + 1);
  return a;
}

void add_scaled(Poly& dst, const Poly& src, double s) {
  if (dst.size() < src.size()) dst.resize(src.size(), 0.0);
  for (size_t i = 0; i < src.size(); ++i) dst[i] += s * src[i];
}

// p(x) * (b0 + b1 x)
Poly mul_linear(const Poly& p, double b0, double b1) {
  Poly out(p.size() + 1, 0.0);
  for (size_t i = 0; i < p.size(); ++i) {
    out[i] += b0 * p[i];
    out[i + 1] += b1 * p[i];
  }
  return out;
}

// p(x / c): coefficient i scales by c^{-i}
Poly scale_arg(const Poly& p, double inv_c) {
  Poly out = p;
  double f = 1.0;
  for (size_t i = 0; i < out.size(); ++i) {
    out[i] *= f;
    f *= inv_c;
  }
  return out;
}

double poly_coeff_scale(const Poly& p, double x) {
  double s = 0.0, pw = 1.0;
  for (double a : p) {
    s = std::max(s, std::abs(a) * std::abs(pw));
    pw *= x;
  }
  return s;
}

void check_params(int n, double c) {
  if (n < 1) throw input_error("spline order must be >= 1");
  if (n > kMaxSplineOrder) throw range_error("spline order exceeds the conditioning cap");
  if (!(c > 1e-9) || !(c < 1.0 - 1e-9))
    throw input_error("knot ratio c must lie strictly inside (0, 1)");
}

}  // namespace

PiecewiseEvenSpline::PiecewiseEvenSpline(int order, double ratio, std::vector<SplinePiece> pieces)
    : order_(order), c_(ratio), pieces_(std::move(pieces)) {
  check_params(order, ratio);
  if (static_cast<int>(pieces_.size()) != order)
    throw input_error("piece count must equal the spline order");
  knots_.resize(order_ + 1);
  // repeated multiplication keeps adjacent boundary values bit-identical
  knots_[order_] = 1.0;
  for (int i = order_ - 1; i >= 0; --i) knots_[i] = knots_[i + 1] * c_;
  for (int i = 0; i < order_; ++i) {
    pieces_[i].lo = knots_[i];
    pieces_[i].hi = knots_[i + 1];
  }
}

int PiecewiseEvenSpline::piece_index(double x) const {
  // right-continuous selection; the choice is immaterial for n >= 2
  const auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
  int i = static_cast<int>(it - knots_.begin()) - 1;
  if (i >= order_) i = order_ - 1;  // x == 1 belongs to the last piece
  return i;
}

double PiecewiseEvenSpline::operator()(double gamma) const {
  const double x = std::abs(gamma);
  if (x < knots_.front() || x > knots_.back()) return 0.0;
  if (order_ == 1 && x <= knots_.front()) return 0.0;  // half-open (c, 1]
  return horner(pieces_[piece_index(x)].coeff, x);
}

double PiecewiseEvenSpline::derivative(double gamma, int m) const {
  if (m < 0) throw input_error("derivative order must be >= 0");
  if (m == 0) return (*this)(gamma);
  if (m >= order_) return 0.0;  // piece degrees are <= order-1
  const double x = std::abs(gamma);
  if (x < knots_.front() || x > knots_.back()) return 0.0;
  if (order_ == 1 && x <= knots_.front()) return 0.0;
  const double v = horner(derive(pieces_[piece_index(x)].coeff, m), x);
  return (gamma < 0.0 && m % 2 == 1) ? -v : v;
}

double PiecewiseEvenSpline::integral() const {
  double total = 0.0;
  for (const auto& p : pieces_) {
    const Poly a = antiderive(p.coeff);
    total += horner(a, p.hi) - horner(a, p.lo);
  }
  return 2.0 * total;
}

double PiecewiseEvenSpline::integral_from_zero(double x) const {
  if (x < 0.0) return -integral_from_zero(-x);
  double total = 0.0;
  for (const auto& p : pieces_) {
    if (x <= p.lo) break;
    const Poly a = antiderive(p.coeff);
    total += horner(a, std::min(x, p.hi)) - horner(a, p.lo);
  }
  return total;
}

PiecewiseEvenSpline build_spline(int n, double c) {
  check_params(n, c);
  // pieces indexed by k: domain [c^{k+1}, c^k], k = 0 outermost
  std::vector<Poly> cur = {{1.0}};  // h_1 on (c, 1]
  const double inv_c = 1.0 / c;
  double c_pow = c;  // c^{m-1} while assembling order m
  for (int m = 2; m <= n; ++m) {
    std::vector<Poly> next(m);
    const double f = 2.0 / (m - 1);
    for (int k = 0; k < m; ++k) {
      Poly acc;
      if (k <= m - 2) {
        // (1 - x) * P_k
        Poly t = mul_linear(cur[k], 1.0, -1.0);
        add_scaled(acc, t, f);
      }
      if (k >= 1) {
        // (x/c - c^{m-1}) * P_{k-1}(x/c)
        Poly shifted = scale_arg(cur[k - 1], inv_c);
        Poly t = mul_linear(shifted, -c_pow, inv_c);
        add_scaled(acc, t, f);
      }
      if (acc.empty()) acc = {0.0};
      next[k] = std::move(acc);
    }
    cur.swap(next);
    c_pow *= c;
  }
  // store ascending by domain: piece i on [knots_i, knots_{i+1}] is k = n-1-i
  std::vector<SplinePiece> pieces(n);
  for (int i = 0; i < n; ++i) pieces[i].coeff = cur[n - 1 - i];
  return PiecewiseEvenSpline(n, c, std::move(pieces));
}

std::vector<double> spline_integrals(int n, double c) {
  check_params(n, c);
  std::vector<double> q;
  q.reserve(n);
  for (int k = 1; k <= n; ++k) q.push_back(build_spline(k, c).integral());
  return q;
}

KnotMatchReport knot_smoothness(const PiecewiseEvenSpline& s) {
  KnotMatchReport rep;
  const int n = s.order();
  const auto& knots = s.knots();
  const auto& pieces = s.pieces();

  auto deriv_at = [&](const SplinePiece& p, double x, int m) {
    return horner(derive(p.coeff, m), x);
  };
  auto scale_at = [&](double x, int m, int left_idx, int right_idx) {
    double sc = 1.0;
    if (left_idx >= 0) sc = std::max(sc, poly_coeff_scale(derive(pieces[left_idx].coeff, m), x));
    if (right_idx >= 0) sc = std::max(sc, poly_coeff_scale(derive(pieces[right_idx].coeff, m), x));
    return sc;
  };

  for (size_t ki = 0; ki < knots.size(); ++ki) {
    const double x = knots[ki];
    const int left = static_cast<int>(ki) - 1;                        // piece below the knot
    const int right = ki < knots.size() - 1 ? static_cast<int>(ki) : -1;  // piece above
    for (int m = 0; m <= n - 2; ++m) {
      KnotMatchReport::Entry e;
      e.knot = x;
      e.deriv_order = m;
      e.left = left >= 0 ? deriv_at(pieces[left], x, m) : 0.0;   // outside: zero function
      e.right = right >= 0 ? deriv_at(pieces[right], x, m) : 0.0;
      e.scale = scale_at(x, m, left, right);
      rep.matched.push_back(e);
      const double mismatch = std::abs(e.left - e.right) / e.scale;
      rep.max_relative_mismatch = std::max(rep.max_relative_mismatch, mismatch);
    }
    if (n >= 1) {
      KnotMatchReport::Entry e;
      e.knot = x;
      e.deriv_order = n - 1;
      e.left = left >= 0 ? deriv_at(pieces[left], x, n - 1) : 0.0;
      e.right = right >= 0 ? deriv_at(pieces[right], x, n - 1) : 0.0;
      e.scale = scale_at(x, n - 1, left, right);
      rep.jumps.push_back(e);
    }
  }
  return rep;
}

ConsistencyReport transform_consistency_check(int n, double c, const QuadratureSpec& quad,
                                              int grid_points) {
  if (n < 2) throw input_error("consistency check needs order >= 2");
  check_params(n, c);
  const PiecewiseEvenSpline prev = build_spline(n - 1, c);
  const PiecewiseEvenSpline cur = build_spline(n, c);
  const Function1D f = as_integrand(prev);

  ConsistencyReport rep;
  rep.n_points = grid_points;
  for (int i = 0; i < grid_points; ++i) {
    // cover the support, a margin beyond it, and the mirrored side
    const double x = -0.1 + 1.3 * (i + 0.5) / grid_points;
    const double via_transform = transform_1d(f, c, x, quad);
    const double via_recursion = cur(x);
    const double dev = std::abs(via_transform - via_recursion);
    if (dev > rep.max_deviation) {
      rep.max_deviation = dev;
      rep.argmax = x;
    }
  }
  return rep;
}

PartitionSystem normalized_partition(int n, double c) {
  check_params(n, c);
  auto spline = std::make_shared<PiecewiseEvenSpline>(build_spline(n, c));
  const double normalizer = n >= 2 ? build_spline(n - 1, c).integral() : 1.0;

  PartitionSystem sys;
  sys.M = SquareMatrix::scalar(1, c);
  sys.norm = Norm::euclidean;
  sys.target_constant = 1.0;
  sys.g = ScalarField::real(
      1, [spline, normalizer](std::span<const double> x) { return (*spline)(x[0]) / normalizer; });
  sys.g.support = spline->support();
  sys.g.smoothness = n >= 2 ? "C^" + std::to_string(n - 2) : "piecewise-constant";
  sys.g.sup_bound = 1.0;
  sys.nonneg_guaranteed = true;  // h_n > 0 on its open support
  sys.square_sum_lower_bounded = n >= 2;

  if (n >= 2) {
    // telescoping companion: Phi(|x|/c)/Q with Phi the even antiderivative of
    // the previous order
    auto prev = std::make_shared<PiecewiseEvenSpline>(build_spline(n - 1, c));
    PhiWitness wit;
    wit.phi = ScalarField::real(1, [prev, normalizer, c](std::span<const double> x) {
      return 2.0 * prev->integral_from_zero(std::abs(x[0]) / c) / normalizer;
    });
    wit.limit_backward = 1.0;
    wit.limit_forward = 0.0;
    sys.phi = std::move(wit);
  }
  sys.description = "spline-partition n=" + std::to_string(n);
  return sys;
}

ScalarField as_field(const PiecewiseEvenSpline& s) {
  auto sp = std::make_shared<PiecewiseEvenSpline>(s);
  ScalarField f = ScalarField::real(1, [sp](std::span<const double> x) { return (*sp)(x[0]); });
  f.support = s.support();
  f.smoothness = s.order() >= 2 ? "C^" + std::to_string(s.order() - 2) : "piecewise-constant";
  f.sup_bound = 1.0;
  return f;
}

Function1D as_integrand(const PiecewiseEvenSpline& s) {
  auto sp = std::make_shared<PiecewiseEvenSpline>(s);
  Function1D f;
  f.f = [sp](double t) { return (*sp)(t); };
  const auto& k = s.knots();
  for (auto it = k.rbegin(); it != k.rend(); ++it) f.breakpoints.push_back(-*it);
  f.breakpoints.insert(f.breakpoints.end(), k.begin(), k.end());
  f.support = {{-1.0, 1.0}};
  f.abs_support = {{k.front(), k.back()}};
  f.name = "spline-order-" + std::to_string(s.order());
  return f;
}

}  // namespace spou
