#include "sgff/specfun.hpp"

#include <cmath>

#include "sgff/errors.hpp"
#include "sgff/quadrature.hpp"

namespace sgff {
namespace detail {

// Below this threshold the integrands are evaluated by their Taylor
// expansions through t^5; both the truncation and the direct expressions'
// cancellation error stay around 1e-12 at the cut.
constexpr double kSeriesCut = 1e-2;

void barnes_series_coeffs(double z, double c[6]) {
  const double z2 = z * z, z3 = z2 * z, z4 = z3 * z, z5 = z4 * z, z6 = z5 * z;
  const double z7 = z6 * z, z8 = z7 * z;
  c[0] = z3 / 3.0 - z2 - z / 6.0;
  c[1] = -z4 / 6.0 + 7.0 * z2 / 6.0;
  c[2] = z5 / 15.0 - z3 / 9.0 - 2.0 * z2 / 3.0 + z / 30.0;
  c[3] = -z6 / 45.0 + z4 / 18.0 + 3.0 * z2 / 10.0;
  c[4] = 2.0 * z7 / 315.0 - z5 / 45.0 + z3 / 45.0 - 2.0 * z2 / 15.0 - z / 189.0;
  c[5] = -z8 / 630.0 + z6 / 135.0 - z4 / 90.0 + 47.0 * z2 / 945.0;
}

void lz_series_coeffs(double a, double c[6]) {
  const double a2 = a * a, a4 = a2 * a2, a6 = a4 * a2, a8 = a6 * a2;
  c[0] = 2.0 * a2;
  c[1] = (a4 - 7.0 * a2) / 3.0;
  c[2] = 4.0 * a2 / 3.0;
  c[3] = 2.0 * a6 / 45.0 - a4 / 9.0 - 3.0 * a2 / 5.0;
  c[4] = 4.0 * a2 / 15.0;
  c[5] = a8 / 315.0 - 2.0 * a6 / 135.0 + a4 / 45.0 - 94.0 * a2 / 945.0;
}

double eval_poly(const double c[6], double t) {
  return c[0] + t * (c[1] + t * (c[2] + t * (c[3] + t * (c[4] + t * c[5]))));
}

// Integral of the polynomial over [0, d].
double poly_head(const double c[6], double d) {
  double acc = 0.0;
  double dk = d;
  for (int k = 0; k < 6; ++k) {
    acc += c[k] * dk / (k + 1);
    dk *= d;
  }
  return acc;
}

double barnes_integrand(double z, double t) {
  if (t < kSeriesCut) {
    double c[6];
    barnes_series_coeffs(z, c);
    return eval_poly(c, t);
  }
  const double sh = std::sinh(t);
  return (-std::expm1(-2.0 * z * t) / (4.0 * sh * sh) + 0.5 * z * z * std::exp(-2.0 * t) -
          z / (2.0 * t)) /
         t;
}

double lz_integrand(double alpha, double t) {
  if (t < kSeriesCut) {
    double c[6];
    lz_series_coeffs(alpha, c);
    return eval_poly(c, t);
  }
  const double sa = std::sinh(alpha * t), sh = std::sinh(t);
  return (sa * sa / (sh * sh) - alpha * alpha * std::exp(-2.0 * t)) / t;
}

// Affine image of a cached reference Gauss-Legendre rule.
QuadratureRule mapped_gl(int n, double a, double b) {
  static const QuadratureRule base48 = gauss_legendre(48, -1.0, 1.0);
  static const QuadratureRule base64 = gauss_legendre(64, -1.0, 1.0);
  const QuadratureRule& base = n == 48 ? base48 : base64;
  QuadratureRule r;
  r.domain = QuadratureRule::Domain::Finite;
  r.a = a;
  r.b = b;
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  r.nodes = (base.nodes.array() * half + mid).matrix();
  r.weights = base.weights * half;
  return r;
}

// int_{cut}^{T} f with panels sized to the integrand's slowest exponential
// decay scale 1/(2(1 - |z|)); returns the window end T so callers can attach
// analytic tails.  The head (Taylor) part of [0, cut] is passed in.
double tail_integral(const std::function<double(double)>& f, double head_poly_integral,
                     double absz, double* window_end = nullptr) {
  const double tau = 1.0 / std::max(0.05, 1.0 - absz);
  const double t1 = 30.0 + 5.0 * tau;
  const double t2 = 30.0 + 30.0 * tau;
  if (window_end) *window_end = t2;
  double acc = head_poly_integral;
  acc += integrate_1d_real(f, mapped_gl(64, kSeriesCut, 1.0));
  acc += integrate_1d_real(f, mapped_gl(64, 1.0, 5.0));
  acc += integrate_1d_real(f, mapped_gl(64, 5.0, 30.0));
  acc += integrate_1d_real(f, mapped_gl(48, 30.0, t1));
  acc += integrate_1d_real(f, mapped_gl(48, t1, t2));
  return acc;
}

}  // namespace detail

double barnes_g_log(double z) {
  if (std::abs(z) >= 1.0) throw domain_error("barnes_g_log: requires |z| < 1");
  if (z == 0.0) return 0.0;
  double c[6];
  detail::barnes_series_coeffs(z, c);
  const double head = detail::poly_head(c, detail::kSeriesCut);
  double window_end = 0.0;
  double integral = detail::tail_integral(
      [z](double t) { return detail::barnes_integrand(z, t); }, head, std::abs(z),
      &window_end);
  // The -z/(2t) piece of the integrand decays only algebraically; its tail
  // beyond the window is exactly -z/(2 T) (the exponential pieces are below
  // 1e-25 there).
  integral -= z / (2.0 * window_end);
  return 0.5 * z * std::log(2.0 * M_PI) + integral;
}

double lz_integral(double alpha) {
  if (alpha == 0.0) return 0.0;
  double c[6];
  detail::lz_series_coeffs(alpha, c);
  const double head = detail::poly_head(c, detail::kSeriesCut);
  return detail::tail_integral([alpha](double t) { return detail::lz_integrand(alpha, t); },
                               head, std::abs(alpha));
}

double lz_one_point(const LZParams& p) {
  if (std::abs(p.alpha) >= 0.5) throw domain_error("lz_one_point: requires |alpha| < 1/2");
  if (p.mu <= 0.0) throw domain_error("lz_one_point: requires mu > 0");
  if (p.alpha == 0.0) return 1.0;
  return std::pow(0.5 * p.mu, p.alpha * p.alpha) * std::exp(lz_integral(p.alpha));
}

double omega(double a, double mu) {
  if (a <= 0.0) throw domain_error("omega: requires a > 0");
  return 0.5 * mu * (a + 1.0 / a);
}

double bessel_k0(double x) {
  if (x <= 0.0) throw domain_error("bessel_k0: requires x > 0");
  // Substituting s = e^u centres the exponent s + x^2/(4s) = x cosh(u - u*)
  // at u* = log(x/2); the window is chosen so the endpoint values are a
  // factor e^{-45} below the peak e^{-x}.
  const double ustar = std::log(0.5 * x);
  const double w = std::acosh(1.0 + 45.0 / x);
  double acc = 0.0;
  const int panels = 4, n = 80;
  for (int p = 0; p < panels; ++p) {
    const double a = ustar - w + 2.0 * w * p / panels;
    const double b = ustar - w + 2.0 * w * (p + 1) / panels;
    QuadratureRule rule = gauss_legendre(n, a, b);
    acc += integrate_1d_real(
        [x](double u) { return 0.5 * std::exp(-std::exp(u) - 0.25 * x * x * std::exp(-u)); },
        rule);
  }
  return acc;
}

double mass_from_coupling(const CouplingMap& c) {
  return 4.0 * M_PI * std::exp(-0.5 * kEulerGamma) * std::abs(c.z);
}

}  // namespace sgff
