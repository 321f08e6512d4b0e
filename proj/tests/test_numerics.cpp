#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <complex>

#include "oracles.hpp"
#include "sgff/errors.hpp"
#include "sgff/linalg.hpp"
#include "sgff/quadrature.hpp"
#include "sgff/random.hpp"
#include "sgff/spectral.hpp"

using namespace sgff;
using Complex = std::complex<double>;

TEST_CASE("constant integrand on [0,1] integrates to 1") {
  for (int n : {8, 32, 129}) {
    QuadratureRule r = gauss_legendre(n, 0.0, 1.0);
    CHECK(integrate_1d_real([](double) { return 1.0; }, r) == doctest::Approx(1.0).epsilon(1e-14));
    // weights sum to the domain measure
    CHECK(r.weights.sum() == doctest::Approx(1.0).epsilon(1e-13));
    for (int i = 0; i < r.size(); ++i) CHECK(r.weights[i] > 0.0);
    for (int i = 1; i < r.size(); ++i) CHECK(r.nodes[i] > r.nodes[i - 1]);
  }
}

TEST_CASE("periodic rule annihilates e^{2 i theta}") {
  for (int n : {3, 5, 16}) {
    QuadratureRule r = periodic_circle(n);
    Complex v = integrate_1d(
        [](double th) { return std::exp(Complex(0.0, 2.0 * th)); }, r);
    CHECK(std::abs(v) < 1e-13);
  }
}

TEST_CASE("log-mapped half-line integrates e^{-x} to 1") {
  QuadratureRule r = log_halfline(64, 32.0);
  double v = integrate_1d_real([](double x) { return std::exp(-x); }, r);
  CHECK(v == doctest::Approx(1.0).epsilon(1e-10));
  for (int i = 1; i < r.size(); ++i) CHECK(r.nodes[i] > r.nodes[i - 1]);
}

TEST_CASE("quadrature convergence order on smooth integrand") {
  // halving the spacing (doubling nodes) must reduce the error sharply
  auto f = [](double x) { return std::cos(3.0 * x) * std::exp(x); };
  const double exact =
      (std::exp(1.0) * (std::cos(3.0) + 3.0 * std::sin(3.0)) - 1.0) / 10.0;
  double e_prev = 1.0;
  for (int n : {4, 8, 16}) {
    QuadratureRule r = gauss_legendre(n, 0.0, 1.0);
    double e = std::abs(integrate_1d_real(f, r) - exact);
    if (n > 4) CHECK(e < 0.1 * e_prev + 1e-14);  // noise floor
    e_prev = std::max(e, 1e-16);
  }
}

TEST_CASE("non-finite integrand reports the node") {
  QuadratureRule r = gauss_legendre(8, 0.0, 1.0);
  CHECK_THROWS_AS(integrate_1d_real([](double x) { return 1.0 / (x - x); }, r),
                  evaluation_error);
}

TEST_CASE("log_det trivial cases") {
  Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(10, 10);
  CHECK(log_det(eye) == doctest::Approx(0.0));
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Identity(2, 2) * 2.0;
  CHECK(log_det(d) == doctest::Approx(std::log(4.0)).epsilon(1e-14));
}

TEST_CASE("log_det vs cofactor expansion on random symmetric 8x8") {
  RandomStream s{20240101, 7};
  CounterRng rng(s);
  Eigen::MatrixXd a(8, 8);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = 0.3 * rng.normal();
  a += 8.0 * Eigen::MatrixXd::Identity(8, 8);  // keep it positive definite
  const double reference = oracles::cofactor_det(a);
  CHECK(log_det(a) == doctest::Approx(std::log(reference)).epsilon(1e-10));
}

TEST_CASE("log_det additivity for commuting positive-definite pairs") {
  // polynomials in one symmetric matrix commute
  RandomStream s{20240101, 8};
  CounterRng rng(s);
  Eigen::MatrixXd m(6, 6);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = 0.2 * rng.normal();
  Eigen::MatrixXd a = m * m + Eigen::MatrixXd::Identity(6, 6);
  Eigen::MatrixXd b = 0.5 * m + 2.0 * Eigen::MatrixXd::Identity(6, 6);
  CHECK(log_det(Eigen::MatrixXd(a * b)) ==
        doctest::Approx(log_det(a) + log_det(b)).epsilon(1e-9));
}

TEST_CASE("log_det rejects non-real determinants") {
  Eigen::MatrixXcd m(2, 2);
  m << Complex(0, 1), 0, 0, 1;
  CHECK_THROWS_AS(log_det(m), conditioning_error);
}

TEST_CASE("solve_dense identity and diagonal") {
  Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(3, 3);
  Eigen::VectorXcd b(3);
  b << 1.0, Complex(0, 2), -3.0;
  CHECK((solve_dense(eye, b) - b).norm() < 1e-14);
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Identity(1, 1) * 2.0;
  Eigen::VectorXcd b1(1);
  b1 << 4.0;
  CHECK(std::abs(solve_dense(d, b1)[0] - 2.0) < 1e-14);
}

TEST_CASE("solve_dense residual on random 12x12") {
  RandomStream s{77, 3};
  CounterRng rng(s);
  Eigen::MatrixXcd a(12, 12);
  Eigen::VectorXcd b(12);
  for (int i = 0; i < 12; ++i) {
    b[i] = Complex(rng.normal(), rng.normal());
    for (int j = 0; j < 12; ++j) a(i, j) = Complex(rng.normal(), rng.normal());
  }
  Eigen::VectorXcd x = solve_dense(a, b);
  CHECK((a * x - b).norm() / b.norm() < 1e-10);
}

TEST_CASE("solve_dense flags singular pivots") {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(2, 2);
  a(0, 0) = 1.0;
  Eigen::VectorXcd b(2);
  b << 1.0, 1.0;
  CHECK_THROWS_AS(solve_dense(a, b), conditioning_error);
}

TEST_CASE("random streams are deterministic and distinct") {
  RandomStream s{123456789, 42};
  CounterRng a(s), b(s);
  for (int i = 0; i < 100; ++i) CHECK(a.normal() == b.normal());
  CounterRng c(s.substream(1));
  bool any_different = false;
  CounterRng a2(s);
  for (int i = 0; i < 16; ++i) any_different |= (a2.uniform() != c.uniform());
  CHECK(any_different);
}

TEST_CASE("normal variates match moments") {
  RandomStream s{5, 5};
  CounterRng rng(s);
  const int n = 200000;
  double m1 = 0.0, m2 = 0.0;
  for (int i = 0; i < n; ++i) {
    double x = rng.normal();
    m1 += x;
    m2 += x * x;
  }
  m1 /= n;
  m2 /= n;
  CHECK(std::abs(m1) < 3.0 / std::sqrt(static_cast<double>(n)));
  CHECK(std::abs(m2 - 1.0) < 3.0 * std::sqrt(2.0 / n));
}

TEST_CASE("spectral synthesis: zero spectrum gives zero field") {
  Eigen::MatrixXd spec = Eigen::MatrixXd::Zero(16, 16);
  Eigen::MatrixXd f = spectral_synthesize(spec, RandomStream{1, 2});
  CHECK(f.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("spectral synthesis: white spectrum variance") {
  const int n = 16;
  const double c = 2.5;
  Eigen::MatrixXd spec = Eigen::MatrixXd::Constant(n, n, c);
  // expected grid-point variance: (1/N^2) sum S = c
  const int samples = 10000;
  double acc = 0.0;
  Eigen::MatrixXd fa, fb;
  for (int k = 0; k < samples / 2; ++k) {
    synthesize_pair(spec, RandomStream{99, static_cast<uint64_t>(k)}, fa, fb);
    acc += fa(3, 5) * fa(3, 5) + fb(3, 5) * fb(3, 5);
  }
  const double var = acc / samples;
  const double sigma = std::sqrt(2.0 / samples) * c;
  CHECK(std::abs(var - c) < 3.0 * sigma);
}

TEST_CASE("spectral synthesis: covariance matches inverse transform of spectrum") {
  const int n = 16;
  Eigen::MatrixXd spec(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int ni = i <= n / 2 ? i : i - n;
      const int nj = j <= n / 2 ? j : j - n;
      spec(i, j) = 1.0 / (1.0 + ni * ni + nj * nj);
    }
  // exact covariance for displacement (2, 1)
  Eigen::MatrixXcd s = spec.cast<Complex>();
  ifft2(s);
  const double cov_exact = s.real()(2, 1);
  const int samples = 20000;
  double acc = 0.0;
  Eigen::MatrixXd fa, fb;
  for (int k = 0; k < samples / 2; ++k) {
    synthesize_pair(spec, RandomStream{7, static_cast<uint64_t>(k)}, fa, fb);
    acc += fa(4, 6) * fa(6, 7) + fb(4, 6) * fb(6, 7);
  }
  const double cov = acc / samples;
  // crude variance bound for the product estimator
  const double var0 = s.real()(0, 0);
  const double sigma = std::sqrt((var0 * var0 + cov_exact * cov_exact) / samples);
  CHECK(std::abs(cov - cov_exact) < 3.5 * sigma);
}

TEST_CASE("spectral synthesis rejects negative spectrum") {
  Eigen::MatrixXd spec = Eigen::MatrixXd::Constant(8, 8, -1.0);
  CHECK_THROWS_AS(spectral_synthesize(spec, RandomStream{}), domain_error);
}

TEST_CASE("seed determinism: equal seeds give bit-identical fields") {
  Eigen::MatrixXd spec = Eigen::MatrixXd::Constant(32, 32, 1.0);
  Eigen::MatrixXd f1 = spectral_synthesize(spec, RandomStream{10, 20});
  Eigen::MatrixXd f2 = spectral_synthesize(spec, RandomStream{10, 20});
  CHECK((f1 - f2).cwiseAbs().maxCoeff() == 0.0);
}
