#pragma once

// Test-only oracles: independent evaluation routes used to freeze expected
// values.  Nothing here is shared with the library implementation paths it
// checks.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <functional>

namespace oracles {

// Tanh-sinh quadrature on a finite interval; doubles the mesh until the
// result stabilizes.
inline double tanh_sinh(const std::function<double(double)>& f, double a, double b,
                        int max_level = 12) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  const double tmax = 3.8;
  double prev = 0.0;
  double result = 0.0;
  for (int level = 3; level <= max_level; ++level) {
    const int n = 1 << level;
    const double h = 2.0 * tmax / n;
    double acc = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double t = -tmax + i * h;
      const double sh = 0.5 * M_PI * std::sinh(t);
      const double x = mid + half * std::tanh(sh);
      const double w = half * 0.5 * M_PI * std::cosh(t) / std::pow(std::cosh(sh), 2);
      const double wt = (i == 0 || i == n) ? 0.5 : 1.0;
      if (x <= a || x >= b) continue;
      acc += wt * h * w * f(x);
    }
    result = acc;
    if (level > 5 && std::abs(result - prev) < 1e-14 * (1.0 + std::abs(result))) break;
    prev = result;
  }
  return result;
}

// Adaptive Simpson with absolute tolerance.
inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b,
                                   double fa, double fm, double fb, double whole, double tol,
                                   int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-12, int depth = 40) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth);
}

// zeta(k) for integer k >= 2 by Euler-Maclaurin.
inline double zeta(int k) {
  const int N = 24;
  double s = 0.0;
  for (int n = 1; n < N; ++n) s += std::pow(n, -k);
  const double Nk = std::pow(N, -k);
  s += Nk * N / (k - 1.0) + 0.5 * Nk;
  // Bernoulli correction terms B2/2!, B4/4!, B6/6!.
  const double b[] = {1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0};
  double fac = static_cast<double>(k) * Nk / N;
  s += b[0] / 2.0 * fac;
  fac *= (k + 1.0) * (k + 2.0) / (N * N);
  s += b[1] / 24.0 * fac;
  fac *= (k + 3.0) * (k + 4.0) / (N * N);
  s += b[2] / 720.0 * fac;
  return s;
}

// log G(1 + w) for |w| < 1 by the Taylor series
//   (log(2 pi) - 1)/2 w - (1 + gamma)/2 w^2 + sum_{k>=3} (-1)^{k-1} zeta(k-1) w^k / k.
inline double log_barnes_series(double w) {
  const double gamma = 0.57721566490153286060651209;
  double s = 0.5 * (std::log(2.0 * M_PI) - 1.0) * w - 0.5 * (1.0 + gamma) * w * w;
  double wk = w * w;
  for (int k = 3; k <= 80; ++k) {
    wk *= w;
    const double term = ((k % 2 == 1) ? 1.0 : -1.0) * zeta(k - 1) * wk / k;
    s += term;
    if (std::abs(term) < 1e-17) break;
  }
  return s;
}

// K_0 by the ascending series (x <= 10) or the asymptotic expansion.
inline double bessel_k0_series(double x) {
  const double gamma = 0.57721566490153286060651209;
  if (x <= 10.0) {
    const double q = 0.25 * x * x;
    double i0 = 1.0, term = 1.0, hsum = 0.0, acc = 0.0;
    for (int k = 1; k <= 60; ++k) {
      term *= q / (k * k);
      i0 += term;
      hsum += 1.0 / k;
      acc += term * hsum;
    }
    return -(std::log(0.5 * x) + gamma) * i0 + acc;
  }
  const double ix = 1.0 / (8.0 * x);
  double term = 1.0, acc = 1.0;
  // a_k = prod (2j-1)^2 / (k! 8^k x^k) with alternating sign
  double num = 1.0;
  for (int k = 1; k <= 8; ++k) {
    num *= (2.0 * k - 1.0) * (2.0 * k - 1.0);
    term = num / std::tgamma(k + 1.0) * std::pow(-ix, k);
    acc += term;
  }
  return std::sqrt(0.5 * M_PI / x) * std::exp(-x) * acc;
}

// Determinant by cofactor expansion (small matrices only).
inline double cofactor_det(const Eigen::MatrixXd& m) {
  const int n = static_cast<int>(m.rows());
  if (n == 1) return m(0, 0);
  double acc = 0.0;
  for (int j = 0; j < n; ++j) {
    Eigen::MatrixXd minor(n - 1, n - 1);
    for (int r = 1; r < n; ++r) {
      int cc = 0;
      for (int c = 0; c < n; ++c) {
        if (c == j) continue;
        minor(r - 1, cc++) = m(r, c);
      }
    }
    acc += ((j % 2 == 0) ? 1.0 : -1.0) * m(0, j) * cofactor_det(minor);
  }
  return acc;
}

inline std::complex<double> cofactor_det(const Eigen::MatrixXcd& m) {
  const int n = static_cast<int>(m.rows());
  if (n == 1) return m(0, 0);
  std::complex<double> acc = 0.0;
  for (int j = 0; j < n; ++j) {
    Eigen::MatrixXcd minor(n - 1, n - 1);
    for (int r = 1; r < n; ++r) {
      int cc = 0;
      for (int c = 0; c < n; ++c) {
        if (c == j) continue;
        minor(r - 1, cc++) = m(r, c);
      }
    }
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    acc += sign * m(0, j) * cofactor_det(minor);
  }
  return acc;
}

}  // namespace oracles
