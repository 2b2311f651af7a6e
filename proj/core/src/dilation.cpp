#include "spou/dilation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spou/errors.hpp"

namespace spou {

namespace {
constexpr int kEnvelopeSearchCap = 64;
}

DilationOrbit::DilationOrbit(SquareMatrix m, Norm norm, TruncationPolicy policy)
    : m_(std::move(m)), minv_(m_.inverse()), norm_(norm), policy_(policy) {
  if (!(policy_.tail_tol > 0.0) || policy_.j_abs_max < 1)
    throw input_error("truncation policy needs tail_tol > 0 and j_abs_max >= 1");
  up_.tab.push_back(PowerBounds{0, 1.0, 1.0});
  down_.tab.push_back(PowerBounds{0, 1.0, 1.0});
}

void DilationOrbit::grow(Side& s, const SquareMatrix& base, int upto) const {
  if (s.overflowed) return;
  while (static_cast<int>(s.tab.size()) <= upto) {
    const int k = static_cast<int>(s.tab.size());
    SquareMatrix p = k == 1 ? base : s.power_cache * base;
    s.power_cache = p;
    if (!p.all_finite()) {
      s.overflowed = true;
      // treat as escaped: infinite gains exclude any bounded annulus
      s.tab.push_back(PowerBounds{k, std::numeric_limits<double>::infinity(),
                                  std::numeric_limits<double>::infinity()});
      return;
    }
    PowerBounds b;
    b.j = k;
    if (norm_ == Norm::euclidean) {
      const auto sv = singular_values(p);
      b.lambda = sv.front();
      b.mu = sv.back();
    } else {
      b.mu = operator_norm(p, Norm::max);
      b.lambda = min_gain(p, Norm::max);
    }
    s.tab.push_back(b);
    if (s.first_gain < 0 && b.lambda > 1.0) s.first_gain = k;
    if (s.first_shrink < 0 && b.mu < 1.0) s.first_shrink = k;
    s.prefix_min_lambda = std::min(s.prefix_min_lambda, b.lambda);
    s.prefix_max_mu = std::max(s.prefix_max_mu, b.mu);
  }
}

int DilationOrbit::stop_index(const Side& s, double gnorm, double r_lo, double r_hi) const {
  int best = -1;
  if (std::isfinite(r_hi) && s.first_gain > 0) {
    // lambda_{q*j0 + r} >= Lambda * lambda_{j0}^q: all indices beyond
    // j0 * q_esc have min-gain above r_hi / gnorm.
    const double lam = s.tab[s.first_gain].lambda;
    const double base = s.prefix_min_lambda * gnorm;
    double q = std::log(r_hi / base) / std::log(lam);
    const int q_esc = q < 0 ? 0 : static_cast<int>(std::floor(q)) + 1;
    best = s.first_gain * q_esc;
  }
  if (r_lo > 0.0 && s.first_shrink > 0) {
    const double mu = s.tab[s.first_shrink].mu;
    const double base = s.prefix_max_mu * gnorm;
    double q = std::log(base / r_lo) / std::log(1.0 / mu);
    const int q_col = q < 0 ? 0 : static_cast<int>(std::floor(q)) + 1;
    const int cand = s.first_shrink * q_col;
    best = best < 0 ? cand : std::min(best, cand);
  }
  return best;
}

DilationOrbit::Window DilationOrbit::window(double gamma_norm, const Annulus& a) const {
  if (a.norm != norm_) throw input_error("annulus norm differs from the dilation norm");
  if (!(gamma_norm > 0.0)) return Window{0, -1, true};

  std::lock_guard<std::mutex> lock(mu_);
  grow(up_, m_, kEnvelopeSearchCap);
  grow(down_, minv_, kEnvelopeSearchCap);

  Window w;
  w.certified = true;

  const int up_stop = stop_index(up_, gamma_norm, a.r_lo, a.r_hi);
  if (up_stop < 0) {
    w.j_max = policy_.j_abs_max;
    w.certified = false;
  } else {
    w.j_max = std::min(up_stop - 1, policy_.j_abs_max);
    if (up_stop - 1 > policy_.j_abs_max) w.certified = false;
  }

  const int down_stop = stop_index(down_, gamma_norm, a.r_lo, a.r_hi);
  if (down_stop < 0) {
    w.j_min = -policy_.j_abs_max;
    w.certified = false;
  } else {
    w.j_min = -std::min(down_stop - 1, policy_.j_abs_max);
    if (down_stop - 1 > policy_.j_abs_max) w.certified = false;
  }
  return w;
}

void DilationOrbit::visit(std::span<const double> gamma, const Window& w,
                          const std::function<void(int, std::span<const double>)>& fn) const {
  if (w.empty()) return;
  const int d = m_.dim();
  std::vector<double> cur(gamma.begin(), gamma.end());
  std::vector<double> next(d);
  if (w.j_min >= 0) {
    for (int k = 0; k < w.j_min; ++k) {
      m_.apply(cur, next);
      cur.swap(next);
    }
  } else {
    for (int k = 0; k < -w.j_min; ++k) {
      minv_.apply(cur, next);
      cur.swap(next);
    }
  }
  fn(w.j_min, cur);
  for (int j = w.j_min + 1; j <= w.j_max; ++j) {
    m_.apply(cur, next);
    cur.swap(next);
    fn(j, cur);
  }
}

PowerBounds DilationOrbit::bounds(int j) const {
  std::lock_guard<std::mutex> lock(mu_);
  if (j >= 0) {
    grow(up_, m_, j);
    return up_.tab[std::min<size_t>(j, up_.tab.size() - 1)];
  }
  grow(down_, minv_, -j);
  PowerBounds b = down_.tab[std::min<size_t>(-j, down_.tab.size() - 1)];
  b.j = j;
  return b;
}

}  // namespace spou
