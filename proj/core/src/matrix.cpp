#include "spou/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>

#include "spou/errors.hpp"

namespace spou {

double vec_norm(std::span<const double> x, Norm norm) {
  if (norm == Norm::euclidean) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
  }
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

SquareMatrix::SquareMatrix(std::initializer_list<std::initializer_list<double>> rows) {
  dim_ = static_cast<int>(rows.size());
  a_.reserve(static_cast<size_t>(dim_) * dim_);
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != dim_) throw input_error("matrix rows must form a square");
    a_.insert(a_.end(), r.begin(), r.end());
  }
}

SquareMatrix SquareMatrix::identity(int dim) { return scalar(dim, 1.0); }

SquareMatrix SquareMatrix::scalar(int dim, double value) {
  if (dim < 1) throw input_error("matrix dimension must be >= 1");
  SquareMatrix m(dim);
  for (int i = 0; i < dim; ++i) m.at(i, i) = value;
  return m;
}

SquareMatrix SquareMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const int d = static_cast<int>(rows.size());
  if (d < 1) throw input_error("matrix dimension must be >= 1");
  SquareMatrix m(d);
  for (int i = 0; i < d; ++i) {
    if (static_cast<int>(rows[i].size()) != d)
      throw input_error("matrix rows must form a square");
    for (int j = 0; j < d; ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

bool SquareMatrix::all_finite() const {
  return std::all_of(a_.begin(), a_.end(), [](double v) { return std::isfinite(v); });
}

double SquareMatrix::max_abs_entry() const {
  double m = 0.0;
  for (double v : a_) m = std::max(m, std::abs(v));
  return m;
}

SquareMatrix SquareMatrix::transposed() const {
  SquareMatrix t(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) t.at(j, i) = at(i, j);
  return t;
}

SquareMatrix SquareMatrix::operator*(const SquareMatrix& rhs) const {
  if (rhs.dim_ != dim_) throw input_error("matrix dimension mismatch");
  SquareMatrix out(dim_);
  for (int i = 0; i < dim_; ++i)
    for (int k = 0; k < dim_; ++k) {
      const double aik = at(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < dim_; ++j) out.at(i, j) += aik * rhs.at(k, j);
    }
  return out;
}

void SquareMatrix::apply(std::span<const double> in, std::span<double> out) const {
  if (static_cast<int>(in.size()) != dim_ || static_cast<int>(out.size()) != dim_)
    throw input_error("vector dimension mismatch");
  for (int i = 0; i < dim_; ++i) {
    double s = 0.0;
    for (int j = 0; j < dim_; ++j) s += at(i, j) * in[j];
    out[i] = s;
  }
}

std::vector<double> SquareMatrix::apply(std::span<const double> in) const {
  std::vector<double> out(dim_);
  apply(in, out);
  return out;
}

double SquareMatrix::det_tolerance() const {
  double scale = max_abs_entry();
  if (scale == 0.0) return 0.0;
  double t = 1e-12;
  for (int i = 0; i < dim_; ++i) t *= scale;
  return t;
}

double SquareMatrix::determinant() const {
  if (!all_finite()) throw input_error("matrix entries must be finite");
  std::vector<double> lu = a_;
  const int d = dim_;
  double det = 1.0;
  for (int col = 0; col < d; ++col) {
    int piv = col;
    for (int r = col + 1; r < d; ++r)
      if (std::abs(lu[r * d + col]) > std::abs(lu[piv * d + col])) piv = r;
    if (lu[piv * d + col] == 0.0) return 0.0;
    if (piv != col) {
      for (int j = 0; j < d; ++j) std::swap(lu[piv * d + j], lu[col * d + j]);
      det = -det;
    }
    det *= lu[col * d + col];
    for (int r = col + 1; r < d; ++r) {
      const double f = lu[r * d + col] / lu[col * d + col];
      for (int j = col; j < d; ++j) lu[r * d + j] -= f * lu[col * d + j];
    }
  }
  return det;
}

SquareMatrix SquareMatrix::inverse() const {
  if (!all_finite()) throw input_error("matrix entries must be finite");
  const int d = dim_;
  if (std::abs(determinant()) <= det_tolerance())
    throw input_error("matrix is singular (|det| below tolerance)");
  std::vector<double> work = a_;
  SquareMatrix inv = identity(d);
  for (int col = 0; col < d; ++col) {
    int piv = col;
    for (int r = col + 1; r < d; ++r)
      if (std::abs(work[r * d + col]) > std::abs(work[piv * d + col])) piv = r;
    if (work[piv * d + col] == 0.0) throw input_error("matrix is singular");
    if (piv != col) {
      for (int j = 0; j < d; ++j) {
        std::swap(work[piv * d + j], work[col * d + j]);
        std::swap(inv.at(piv, j), inv.at(col, j));
      }
    }
    const double p = work[col * d + col];
    for (int j = 0; j < d; ++j) {
      work[col * d + j] /= p;
      inv.at(col, j) /= p;
    }
    for (int r = 0; r < d; ++r) {
      if (r == col) continue;
      const double f = work[r * d + col];
      if (f == 0.0) continue;
      for (int j = 0; j < d; ++j) {
        work[r * d + j] -= f * work[col * d + j];
        inv.at(r, j) -= f * inv.at(col, j);
      }
    }
  }
  return inv;
}

std::vector<double> singular_values(const SquareMatrix& m) {
  const int d = m.dim();
  // One-sided Jacobi: orthogonalize column pairs; singular values are the
  // final column norms.
  std::vector<double> a = m.data();
  auto col_dot = [&](int p, int q) {
    double s = 0.0;
    for (int i = 0; i < d; ++i) s += a[i * d + p] * a[i * d + q];
    return s;
  };
  const double eps = 1e-15;
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (int p = 0; p < d - 1; ++p) {
      for (int q = p + 1; q < d; ++q) {
        const double app = col_dot(p, p);
        const double aqq = col_dot(q, q);
        const double apq = col_dot(p, q);
        if (std::abs(apq) <= eps * std::sqrt(app * aqq) || apq == 0.0) continue;
        rotated = true;
        const double theta = 0.5 * std::atan2(2.0 * apq, app - aqq);
        const double cs = std::cos(theta), sn = std::sin(theta);
        for (int i = 0; i < d; ++i) {
          const double vp = a[i * d + p], vq = a[i * d + q];
          a[i * d + p] = cs * vp + sn * vq;
          a[i * d + q] = -sn * vp + cs * vq;
        }
      }
    }
    if (!rotated) break;
  }
  std::vector<double> sv(d);
  for (int p = 0; p < d; ++p) sv[p] = std::sqrt(std::max(0.0, col_dot(p, p)));
  std::sort(sv.begin(), sv.end());
  return sv;
}

namespace {

double max_abs_row_sum(const SquareMatrix& m) {
  double best = 0.0;
  for (int i = 0; i < m.dim(); ++i) {
    double s = 0.0;
    for (int j = 0; j < m.dim(); ++j) s += std::abs(m.at(i, j));
    best = std::max(best, s);
  }
  return best;
}

double frobenius(const SquareMatrix& m) {
  double s = 0.0;
  for (double v : m.data()) s += v * v;
  return std::sqrt(s);
}

}  // namespace

double operator_norm(const SquareMatrix& m, Norm norm) {
  if (norm == Norm::euclidean) return singular_values(m).back();
  return max_abs_row_sum(m);
}

double min_gain(const SquareMatrix& m, Norm norm) {
  if (norm == Norm::euclidean) return singular_values(m).front();
  if (std::abs(m.determinant()) <= m.det_tolerance()) return 0.0;
  return 1.0 / max_abs_row_sum(m.inverse());
}

double spectral_radius(const SquareMatrix& m) {
  if (!m.all_finite()) throw input_error("matrix entries must be finite");
  const int d = m.dim();
  if (d == 1) return std::abs(m.at(0, 0));
  if (d == 2) {
    const double tr = m.at(0, 0) + m.at(1, 1);
    const double det = m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0);
    const double disc = tr * tr - 4.0 * det;
    if (disc >= 0.0) {
      const double root = std::sqrt(disc);
      return std::max(std::abs((tr + root) / 2.0), std::abs((tr - root) / 2.0));
    }
    return std::sqrt(det);  // complex conjugate pair: |lambda|^2 = det
  }
  // Gelfand via normalized repeated squaring: after k steps the scaled matrix
  // represents M^(2^k); log-norm accumulator keeps the magnitude in range.
  SquareMatrix b = m;
  double log_scale = 0.0;
  double prev = -1.0;
  for (int k = 1; k <= 64; ++k) {
    const double f = frobenius(b);
    if (f == 0.0 || !std::isfinite(f)) return 0.0;  // nilpotent collapse
    SquareMatrix nb(d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) nb.at(i, j) = b.at(i, j) / f;
    b = nb * nb;
    log_scale = 2.0 * (log_scale + std::log(f));
    const double n = std::pow(2.0, k);
    const double est = std::exp((log_scale + std::log(frobenius(b))) / n);
    if (prev >= 0.0 && std::abs(est - prev) <= 1e-13 * std::max(est, 1e-300)) return est;
    prev = est;
  }
  return prev;
}

ExpansionCertificate is_expanding(const SquareMatrix& m, Norm norm) {
  if (!m.all_finite()) throw input_error("matrix entries must be finite");
  if (std::abs(m.determinant()) <= m.det_tolerance())
    throw input_error("matrix must be invertible for the expanding test");
  constexpr double tau_spec = 1e-9;

  ExpansionCertificate cert;
  cert.norm = norm;
  cert.spectral_radius_of_inverse = spectral_radius(m.inverse());
  cert.is_expanding = cert.spectral_radius_of_inverse < 1.0 - tau_spec;
  cert.norm_monotone = min_gain(m, norm) >= 1.0 - 1e-12;

  if (cert.is_expanding) {
    const double alpha = 1.0 / (cert.spectral_radius_of_inverse + tau_spec);
    // Sampled witness for ||M^N x|| >= C alpha^N ||x||; the 0.9 margin keeps
    // the certificate valid on finer sample sets than the fitting grid.
    const int d = m.dim();
    const int n_dirs = d == 1 ? 2 : 4096;
    const int n_fit = 24;
    std::mt19937 rng(0x5CA1E);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    double worst = 1.0;
    std::vector<double> x(d), y(d);
    for (int s = 0; s < n_dirs; ++s) {
      if (d == 1) {
        x[0] = s == 0 ? 1.0 : -1.0;
      } else {
        double nn = 0.0;
        for (int i = 0; i < d; ++i) {
          const double u1 = std::max(uni(rng), 1e-12), u2 = uni(rng);
          x[i] = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
          nn += x[i] * x[i];
        }
        nn = std::sqrt(nn);
        if (nn == 0.0) continue;
        for (int i = 0; i < d; ++i) x[i] /= nn;
      }
      const double x0 = vec_norm(x, norm);
      double pw = 1.0;
      std::vector<double> cur = x;
      for (int n = 1; n <= n_fit; ++n) {
        m.apply(cur, y);
        cur = y;
        pw *= alpha;
        worst = std::min(worst, vec_norm(cur, norm) / (pw * x0));
      }
    }
    const double c = std::clamp(0.9 * worst, 1e-300, 1.0);
    cert.growth = GrowthConstants{c, alpha};
  }
  return cert;
}

PowerBounds singular_interval(const SquareMatrix& m, int j, Norm norm, int j_cap) {
  if (std::abs(j) > j_cap) throw range_error("power index exceeds the configured cap");
  if (j == 0) return PowerBounds{0, 1.0, 1.0};
  const SquareMatrix base = j > 0 ? m : m.inverse();
  SquareMatrix p = base;
  for (int k = 1; k < std::abs(j); ++k) p = p * base;
  PowerBounds out;
  out.j = j;
  if (norm == Norm::euclidean) {
    const auto sv = singular_values(p);
    out.lambda = sv.front();
    out.mu = sv.back();
  } else {
    out.mu = max_abs_row_sum(p);
    out.lambda = min_gain(p, Norm::max);
  }
  return out;
}

}  // namespace spou
