#pragma once

namespace sgff {

// Euler-Mascheroni constant.
inline constexpr double kEulerGamma = 0.577215664901532860606512090082402431;

// Parameters of the closed-form one-point function: winding alpha in
// (-1/2, 1/2) and fermion mass mu > 0.
struct LZParams {
  double alpha = 0.0;
  double mu = 1.0;
};

// Coupling-to-mass normalization mu = A |z| with A = 4 pi e^{-gamma/2}.
struct CouplingMap {
  double z = 0.0;
};

// log G(1+z) for |z| < 1, G the Barnes G-function, by quadrature of
//   z/2 log(2 pi) + int_0^inf dt/t [ (1 - e^{-2zt})/(4 sinh^2 t)
//                                    + z^2/2 e^{-2t} - z/(2t) ].
double barnes_g_log(double z);

// I(alpha) = int_0^inf dt/t [ sinh^2(alpha t)/sinh^2 t - alpha^2 e^{-2t} ].
// Stated for |alpha| < 1/2; accepted up to |alpha| < 1 (slower convergence
// of the defining integral near |alpha| = 1 is handled by the quadrature).
double lz_integral(double alpha);

// One-point function (mu/2)^{alpha^2} exp(I(alpha)).
double lz_one_point(const LZParams& p);

// Frequency function omega(a) = mu/2 (a + 1/a), a > 0.
double omega(double a, double mu);

// Modified Bessel function K_0 via the integral representation
// int_0^inf ds/(2s) e^{-s - x^2/(4s)}; relative accuracy ~1e-10 on
// x in [1e-6, 50].
double bessel_k0(double x);

// mu = 4 pi e^{-gamma/2} |z|.
double mass_from_coupling(const CouplingMap& c);

namespace detail {
// Small-t Taylor branches of the integrands above (used below t = 1e-3
// where the direct expressions cancel catastrophically).  Exposed for
// tests.
double barnes_integrand(double z, double t);
double lz_integrand(double alpha, double t);
}  // namespace detail

}  // namespace sgff
