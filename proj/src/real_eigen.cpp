#include "real_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "genspectra/error.hpp"

namespace genspectra::detail {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double sign_of(double magnitude, double s) { return s >= 0.0 ? std::abs(magnitude) : -std::abs(magnitude); }

void balance(Matrix& a) {
  const std::size_t n = a.rows();
  constexpr double radix = 2.0;
  constexpr double sqrdx = radix * radix;
  bool done = false;
  while (!done) {
    done = true;
    for (std::size_t i = 0; i < n; ++i) {
      double r = 0.0;
      double c = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix;
      double f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= sqrdx;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= sqrdx;
      }
      if ((c + r) / f < 0.95 * s) {
        done = false;
        g = 1.0 / f;
        for (std::size_t j = 0; j < n; ++j) a(i, j) *= g;
        for (std::size_t j = 0; j < n; ++j) a(j, i) *= f;
      }
    }
  }
}

void to_hessenberg(Matrix& a) {
  const std::size_t n = a.rows();
  if (n < 3) return;
  std::vector<double> v(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double norm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) norm += a(i, k) * a(i, k);
    norm = std::sqrt(norm);
    if (norm == 0.0) continue;
    const double alpha = a(k + 1, k) > 0.0 ? -norm : norm;
    double vnorm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) {
      v[i] = a(i, k) - (i == k + 1 ? alpha : 0.0);
      vnorm += v[i] * v[i];
    }
    if (vnorm == 0.0) continue;
    // A ← H·A·H with H = I − 2vvᵀ/(vᵀv), acting on indices k+1..n-1.
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = k + 1; i < n; ++i) s += v[i] * a(i, j);
      s *= 2.0 / vnorm;
      for (std::size_t i = k + 1; i < n; ++i) a(i, j) -= s * v[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) s += a(i, j) * v[j];
      s *= 2.0 / vnorm;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= s * v[j];
    }
    for (std::size_t i = k + 2; i < n; ++i) a(i, k) = 0.0;
  }
}

// Francis double-shift QR on an upper Hessenberg matrix (destroys `a`).
std::vector<std::complex<double>> hessenberg_qr(Matrix& a) {
  using std::abs;
  const int n = static_cast<int>(a.rows());
  std::vector<std::complex<double>> wri(static_cast<std::size_t>(n));
  auto at = [&](int i, int j) -> double& {
    return a(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  };

  double anorm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = std::max(i - 1, 0); j < n; ++j) anorm += abs(at(i, j));

  int nn = n - 1;
  double t = 0.0;
  double p = 0.0, q = 0.0, r = 0.0, s = 0.0, w = 0.0, x = 0.0, y = 0.0, z = 0.0;
  while (nn >= 0) {
    int its = 0;
    int l = 0;
    do {
      for (l = nn; l > 0; --l) {
        s = abs(at(l - 1, l - 1)) + abs(at(l, l));
        if (s == 0.0) s = anorm;
        if (abs(at(l, l - 1)) <= kEps * s) {
          at(l, l - 1) = 0.0;
          break;
        }
      }
      x = at(nn, nn);
      if (l == nn) {
        wri[static_cast<std::size_t>(nn--)] = x + t;
      } else {
        y = at(nn - 1, nn - 1);
        w = at(nn, nn - 1) * at(nn - 1, nn);
        if (l == nn - 1) {
          p = 0.5 * (y - x);
          q = p * p + w;
          z = std::sqrt(abs(q));
          x += t;
          if (q >= 0.0) {
            z = p + sign_of(z, p);
            wri[static_cast<std::size_t>(nn - 1)] = wri[static_cast<std::size_t>(nn)] = x + z;
            if (z != 0.0) wri[static_cast<std::size_t>(nn)] = x - w / z;
          } else {
            wri[static_cast<std::size_t>(nn)] = std::complex<double>(x + p, -z);
            wri[static_cast<std::size_t>(nn - 1)] = std::conj(wri[static_cast<std::size_t>(nn)]);
          }
          nn -= 2;
        } else {
          if (its == 30) {
            throw Error(ErrorCode::ConvergenceFailure,
                        "general_eigenvalues: shifted QR did not converge in 30 iterations");
          }
          if (its == 10 || its == 20) {
            // Exceptional shift.
            t += x;
            for (int i = 0; i < nn + 1; ++i) at(i, i) -= x;
            s = abs(at(nn, nn - 1)) + abs(at(nn - 1, nn - 2));
            y = x = 0.75 * s;
            w = -0.4375 * s * s;
          }
          ++its;
          int m = nn - 2;
          for (; m >= l; --m) {
            z = at(m, m);
            r = x - z;
            s = y - z;
            p = (r * s - w) / at(m + 1, m) + at(m, m + 1);
            q = at(m + 1, m + 1) - z - r - s;
            r = at(m + 2, m + 1);
            s = abs(p) + abs(q) + abs(r);
            p /= s;
            q /= s;
            r /= s;
            if (m == l) break;
            const double u = abs(at(m, m - 1)) * (abs(q) + abs(r));
            const double v = abs(p) * (abs(at(m - 1, m - 1)) + abs(z) + abs(at(m + 1, m + 1)));
            if (u <= kEps * v) break;
          }
          for (int i = m; i < nn - 1; ++i) {
            at(i + 2, i) = 0.0;
            if (i != m) at(i + 2, i - 1) = 0.0;
          }
          for (int k = m; k < nn; ++k) {
            if (k != m) {
              p = at(k, k - 1);
              q = at(k + 1, k - 1);
              r = 0.0;
              if (k + 1 != nn) r = at(k + 2, k - 1);
              if ((x = abs(p) + abs(q) + abs(r)) != 0.0) {
                p /= x;
                q /= x;
                r /= x;
              }
            }
            if ((s = sign_of(std::sqrt(p * p + q * q + r * r), p)) != 0.0) {
              if (k == m) {
                if (l != m) at(k, k - 1) = -at(k, k - 1);
              } else {
                at(k, k - 1) = -s * x;
              }
              p += s;
              x = p / s;
              y = q / s;
              z = r / s;
              q /= p;
              r /= p;
              for (int j = k; j < nn + 1; ++j) {
                p = at(k, j) + q * at(k + 1, j);
                if (k + 1 != nn) {
                  p += r * at(k + 2, j);
                  at(k + 2, j) -= p * z;
                }
                at(k + 1, j) -= p * y;
                at(k, j) -= p * x;
              }
              const int mmin = nn < k + 3 ? nn : k + 3;
              for (int i = l; i < mmin + 1; ++i) {
                p = x * at(i, k) + y * at(i, k + 1);
                if (k + 1 != nn) {
                  p += z * at(i, k + 2);
                  at(i, k + 2) -= p * r;
                }
                at(i, k + 1) -= p * q;
                at(i, k) -= p;
              }
            }
          }
        }
      }
    } while (l + 1 < nn);
  }
  return wri;
}

struct Lu {
  Matrix lu;
  std::vector<std::size_t> perm;
};

Lu lu_factor(Matrix m, double floor) {
  const std::size_t n = m.rows();
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(m(i, k)) > std::abs(m(piv, k))) piv = i;
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(piv, j));
      std::swap(perm[k], perm[piv]);
    }
    if (std::abs(m(k, k)) < floor) m(k, k) = m(k, k) < 0.0 ? -floor : floor;
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = m(i, k) / m(k, k);
      m(i, k) = f;
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) -= f * m(k, j);
    }
  }
  return {std::move(m), std::move(perm)};
}

std::vector<double> lu_solve(const Lu& f, const std::vector<double>& b) {
  const std::size_t n = f.lu.rows();
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[f.perm[i]];
    for (std::size_t j = 0; j < i; ++j) s -= f.lu(i, j) * x[j];
    x[i] = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = x[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= f.lu(i, j) * x[j];
    x[i] = s / f.lu(i, i);
  }
  return x;
}

double metric_dot(const Matrix& metric, const std::vector<double>& x, const Vector& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < metric.rows(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < metric.cols(); ++j) row += metric(i, j) * x[j];
    s += y[i] * row;
  }
  return s;
}

}  // namespace

std::vector<std::complex<double>> general_eigenvalues(const Matrix& c) {
  if (!c.is_square()) {
    throw Error(ErrorCode::DimensionMismatch, "general_eigenvalues: matrix must be square");
  }
  Matrix work = c;
  balance(work);
  to_hessenberg(work);
  return hessenberg_qr(work);
}

Vector inverse_iteration(const Matrix& c, double lambda, const Matrix& metric,
                         const std::vector<Vector>& previous) {
  const std::size_t n = c.rows();
  const double scale = std::max(1.0, c.max_abs());
  // Shift slightly off the eigenvalue so the factorization stays regular.
  const double shift = lambda + 1e-10 * std::max(scale, std::abs(lambda));
  Matrix m = c;
  for (std::size_t i = 0; i < n; ++i) m(i, i) -= shift;
  const Lu f = lu_factor(std::move(m), kEps * scale);

  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = 1.0 + 0.1 * std::sin(1.0 + static_cast<double>(i));

  for (int it = 0; it < 6; ++it) {
    x = lu_solve(f, x);
    // Gram-Schmidt in the metric inner product; previous vectors are
    // metric-normalized.
    for (const Vector& y : previous) {
      const double proj = metric_dot(metric, x, y);
      for (std::size_t i = 0; i < n; ++i) x[i] -= proj * y[i];
    }
    double norm = 0.0;
    for (double v : x) norm += v * v;
    norm = std::sqrt(norm);
    if (norm == 0.0 || !std::isfinite(norm)) {
      throw Error(ErrorCode::ConvergenceFailure, "inverse_iteration: iterate collapsed");
    }
    for (double& v : x) v /= norm;
  }
  return Vector(std::move(x));
}

}  // namespace genspectra::detail
