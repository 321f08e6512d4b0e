#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sgff/errors.hpp"
#include "sgff/fredholm.hpp"
#include "sgff/painleve.hpp"

using namespace sgff;

namespace {

RadialProfile log_uniform_profile(double alpha, double mu, double r_lo, double r_hi, int n) {
  RadialProfile p;
  p.alpha = alpha;
  p.mu = mu;
  p.r.resize(n);
  p.sigma.resize(n);
  const double l0 = std::log(r_lo), l1 = std::log(r_hi);
  for (int i = 0; i < n; ++i) p.r[i] = std::exp(l0 + (l1 - l0) * i / (n - 1));
  return p;
}

RadialProfile fredholm_profile(double alpha, double mu, double r_lo, double r_hi, int n,
                               int nodes) {
  RadialProfile p = log_uniform_profile(alpha, mu, r_lo, r_hi, n);
  for (int i = 0; i < p.r.size(); ++i)
    p.sigma[i] = std::log(two_point({alpha, mu, p.r[i]}, nodes, nodes));
  return p;
}

}  // namespace

TEST_CASE("constant profile extracts psi = 0") {
  RadialProfile p = log_uniform_profile(0.2, 1.0, 0.5, 2.0, 9);
  p.sigma.setConstant(3.7);
  PsiProfile psi = extract_psi(p);
  CHECK(psi.psi.cwiseAbs().maxCoeff() == 0.0);
  CHECK(ode_residual(psi, 0.0, 1.0) == 0.0);
}

TEST_CASE("alpha = 0 profile gives zero residuals") {
  RadialProfile p = log_uniform_profile(0.0, 1.0, 0.5, 2.0, 11);
  p.sigma.setZero();
  PsiProfile psi = extract_psi(p);
  CHECK(psi.psi.cwiseAbs().maxCoeff() == 0.0);
  CHECK(ode_residual(psi, 0.0, 1.0) == 0.0);
  CHECK(palmer_first_order_residual(p, psi, 0.0, 1.0) == 0.0);
}

TEST_CASE("constant nonzero psi has strictly positive ODE residual") {
  PsiProfile psi;
  const int n = 9;
  psi.r.resize(n);
  psi.psi.resize(n);
  for (int i = 0; i < n; ++i) {
    psi.r[i] = std::exp(std::log(1.0) + 0.1 * i);
    psi.psi[i] = 0.4;
  }
  CHECK(ode_residual(psi, 0.2, 1.0) > 0.1);
}

TEST_CASE("residual is invariant under psi -> -psi") {
  PsiProfile psi, neg;
  const int n = 11;
  psi.r.resize(n);
  psi.psi.resize(n);
  for (int i = 0; i < n; ++i) {
    psi.r[i] = std::exp(0.05 * i);
    psi.psi[i] = 0.3 * std::exp(-0.3 * i);
  }
  neg = psi;
  neg.psi = -psi.psi;
  CHECK(ode_residual(psi, 0.2, 1.0) == doctest::Approx(ode_residual(neg, 0.2, 1.0)));
}

TEST_CASE("profile from the determinant: psi finite and decreasing") {
  RadialProfile p = fredholm_profile(0.25, 1.0, 0.5, 4.0, 41, 96);
  PsiProfile psi = extract_psi(p);
  for (int i = 0; i < psi.psi.size(); ++i) CHECK(std::isfinite(psi.psi[i]));
  // decreasing over the sampled range
  CHECK(psi.psi[psi.psi.size() - 1] < psi.psi[0]);
}

TEST_CASE("Laplacian nonnegativity on determinant data") {
  RadialProfile p = fredholm_profile(0.25, 1.0, 0.8, 3.5, 31, 96);
  const double h = p.step();
  for (int i = 1; i + 1 < p.r.size(); ++i) {
    const double lap =
        (p.sigma[i + 1] - 2.0 * p.sigma[i] + p.sigma[i - 1]) / (h * h) / (p.r[i] * p.r[i]);
    CHECK(lap > -1e-6);
  }
}

TEST_CASE("ODE and first-order residuals small on determinant data") {
  // pad the range so interior differencing covers [1, 3]
  RadialProfile p = fredholm_profile(0.25, 1.0, 0.85, 3.5, 49, 128);
  PsiProfile psi = extract_psi(p);
  CHECK(ode_residual(psi, p.alpha, p.mu) <= 0.05);
  CHECK(palmer_first_order_residual(p, psi, p.alpha, p.mu) <= 0.05);
}

TEST_CASE("grid refinement shrinks the residuals") {
  RadialProfile coarse = fredholm_profile(0.25, 1.0, 0.85, 3.5, 41, 128);
  RadialProfile fine = fredholm_profile(0.25, 1.0, 0.85, 3.5, 81, 128);
  const double rc = ode_residual(extract_psi(coarse), 0.25, 1.0);
  const double rf = ode_residual(extract_psi(fine), 0.25, 1.0);
  CHECK(rf * 3.0 <= rc);
}

TEST_CASE("inconsistent profile data is rejected") {
  RadialProfile p = log_uniform_profile(0.2, 1.0, 1.0, 2.0, 9);
  for (int i = 0; i < 9; ++i) p.sigma[i] = 5.0 * std::pow(std::log(p.r[i]), 2);
  CHECK_THROWS_AS(extract_psi(p), consistency_error);
}
