#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sgff/errors.hpp"
#include "sgff/gmc.hpp"
#include "sgff/specfun.hpp"
#include "sgff/spectral.hpp"

using namespace sgff;

namespace {

// Small torus for fast statistical checks.
TorusSpec small_spec() {
  TorusSpec t;
  t.box = 50.0;
  t.grid = 64;
  t.eps = 1.0;
  t.mass = 0.2;
  return t;
}

}  // namespace

TEST_CASE("spec validation") {
  TorusSpec t = small_spec();
  t.mass = 0.0;
  CHECK_THROWS_AS(t.validate(), domain_error);
  t = small_spec();
  t.eps = 1e-9;
  CHECK_THROWS_AS(t.validate(), domain_error);
  CHECK(small_spec().wrap_controlled());
}

TEST_CASE("empirical variance matches the spectral sum") {
  TorusSpec t = small_spec();
  const double exact = grid_variance(t);
  const int samples = 20000;
  Eigen::MatrixXd fa, fb;
  double acc = 0.0;
  int count = 0;
  for (int k = 0; k < samples / 2; ++k) {
    synthesize_pair(torus_spectrum(t), RandomStream{2024, static_cast<uint64_t>(k)}, fa, fb);
    // average over a sparse set of decorrelated points
    for (int p = 0; p < 4; ++p) {
      const int i = 8 + 16 * (p % 2), j = 8 + 16 * (p / 2);
      acc += fa(i, j) * fa(i, j) + fb(i, j) * fb(i, j);
      count += 2;
    }
  }
  const double var = acc / count;
  const double sigma = exact * std::sqrt(2.0 / count) * 2.0;  // points are correlated
  CHECK(std::abs(var - exact) < 3.0 * sigma);
}

TEST_CASE("translation invariance of the empirical covariance") {
  TorusSpec t = small_spec();
  const Eigen::MatrixXd table = grid_covariance_table(t);
  const double expect = table(3, 0);
  const int samples = 8000;
  Eigen::MatrixXd fa, fb;
  double c1 = 0.0, c2 = 0.0;
  for (int k = 0; k < samples / 2; ++k) {
    synthesize_pair(torus_spectrum(t), RandomStream{11, static_cast<uint64_t>(k)}, fa, fb);
    c1 += fa(5, 9) * fa(8, 9) + fb(5, 9) * fb(8, 9);
    c2 += fa(40, 21) * fa(43, 21) + fb(40, 21) * fb(43, 21);
  }
  c1 /= samples;
  c2 /= samples;
  const double sigma = table(0, 0) * std::sqrt(2.0 / samples);
  CHECK(std::abs(c1 - expect) < 3.0 * sigma);
  CHECK(std::abs(c2 - expect) < 3.0 * sigma);
}

TEST_CASE("exact_gaussian_moment basics") {
  TorusSpec t = small_spec();
  // all-zero charges
  CHECK(exact_gaussian_moment(t, {{0.0, 3, 4}, {0.0, 10, 2}}) == doctest::Approx(1.0));
  // single charge
  const double alpha = 0.3;
  const double v = exact_gaussian_moment(t, {{alpha, 5, 5}});
  const double expect =
      std::pow(t.eps, -alpha * alpha) * std::exp(-2.0 * M_PI * alpha * alpha * grid_variance(t));
  CHECK(v == doctest::Approx(expect).epsilon(1e-12));
  CHECK(v > 0.0);
  CHECK_THROWS_AS(exact_gaussian_moment(t, {{0.1, 3, 3}, {0.2, 3, 3}}), domain_error);
}

TEST_CASE("neutral pair approaches the continuum formula as (eps, m) -> 0") {
  // trend check across two (eps, m) pairs at fixed separation
  const double alpha = 0.2, r = 3.0;
  auto ratio_to_continuum = [&](double eps, double m, int grid, double box) {
    TorusSpec t;
    t.box = box;
    t.grid = grid;
    t.eps = eps;
    t.mass = m;
    const int d = static_cast<int>(std::round(r / t.cell()));
    const double v = exact_gaussian_moment(t, {{alpha, 0, 0}, {-alpha, d, 0}});
    const double cont = std::pow(2.0 * std::exp(-0.5 * kEulerGamma), 2.0 * alpha * alpha) *
                        std::pow(d * t.cell(), -2.0 * alpha * alpha);
    return v / cont;
  };
  const double r1 = ratio_to_continuum(1.0, 0.2, 64, 50.0);
  const double r2 = ratio_to_continuum(0.5, 0.1, 256, 100.0);
  CHECK(std::abs(r2 - 1.0) < std::abs(r1 - 1.0));
  CHECK(std::abs(r2 - 1.0) < 0.08);
}

TEST_CASE("estimate_moment: zero charges integrate the test functions exactly") {
  TorusSpec t = small_spec();
  MomentRequest req;
  req.samples = 120;
  req.stream = RandomStream{5, 0};
  MomentCharge c;
  c.alpha = 0.0;
  c.f = Eigen::MatrixXd::Zero(t.grid, t.grid);
  c.f(10, 12) = 1.0 / (t.cell() * t.cell());
  req.charges = {c};
  MomentEstimate e = estimate_moment(t, req);
  CHECK(std::abs(e.mean - 1.0) < 1e-12);
  CHECK(e.stderr_ < 1e-12);
}

TEST_CASE("estimate_moment single charge vs exact moment") {
  TorusSpec t = small_spec();
  MomentRequest req;
  req.samples = 4000;
  req.stream = RandomStream{31337, 0};
  MomentCharge c;
  c.alpha = 0.25;
  c.f = Eigen::MatrixXd::Zero(t.grid, t.grid);
  c.f(16, 16) = 1.0 / (t.cell() * t.cell());
  req.charges = {c};
  MomentEstimate e = estimate_moment(t, req);
  const double exact = exact_gaussian_moment(t, {{0.25, 16, 16}});
  CHECK(std::abs(e.mean - exact) < 3.0 * e.stderr_);
}

TEST_CASE("estimate_moment neutral pair vs exact moment") {
  TorusSpec t = small_spec();
  MomentRequest req;
  req.samples = 4000;
  req.stream = RandomStream{424242, 0};
  MomentCharge cp, cm;
  cp.alpha = 0.25;
  cp.f = Eigen::MatrixXd::Zero(t.grid, t.grid);
  cp.f(16, 16) = 1.0 / (t.cell() * t.cell());
  cm.alpha = -0.25;
  cm.f = Eigen::MatrixXd::Zero(t.grid, t.grid);
  cm.f(24, 16) = 1.0 / (t.cell() * t.cell());
  req.charges = {cp, cm};
  MomentEstimate e = estimate_moment(t, req);
  const double exact = exact_gaussian_moment(t, {{0.25, 16, 16}, {-0.25, 24, 16}});
  CHECK(std::abs(e.mean - exact) < 3.0 * e.stderr_);
}

TEST_CASE("seed determinism and thread independence of estimates") {
  TorusSpec t = small_spec();
  MomentRequest req;
  req.samples = 200;
  req.stream = RandomStream{777, 3};
  MomentCharge c;
  c.alpha = 0.3;
  c.f = Eigen::MatrixXd::Zero(t.grid, t.grid);
  c.f(8, 40) = 1.0 / (t.cell() * t.cell());
  req.charges = {c};
  MomentEstimate a = estimate_moment(t, req);
  MomentEstimate b = estimate_moment(t, req);
  CHECK(a.mean == b.mean);
  req.threads = 2;
  MomentEstimate c2 = estimate_moment(t, req);
  CHECK(a.mean == c2.mean);
  CHECK(a.stderr_ == c2.stderr_);
}

TEST_CASE("field symmetry: M_alpha and M_{-alpha} moments are conjugate") {
  TorusSpec t = small_spec();
  MomentRequest req;
  req.samples = 500;
  req.stream = RandomStream{99, 9};
  MomentCharge c;
  c.alpha = 0.35;
  c.f = Eigen::MatrixXd::Zero(t.grid, t.grid);
  c.f(20, 20) = 1.0 / (t.cell() * t.cell());
  req.charges = {c};
  MomentEstimate plus = estimate_moment(t, req);
  req.charges[0].alpha = -0.35;
  MomentEstimate minus = estimate_moment(t, req);
  CHECK(std::abs(plus.mean - std::conj(minus.mean)) < 1e-12);
}

TEST_CASE("non-neutral suppression trend in the mass") {
  // |single-charge moment| shrinks as m decreases (the (2 m e^gamma)^{alpha^2} trend)
  const double alpha = 0.3;
  auto moment_at_mass = [&](double m) {
    TorusSpec t = small_spec();
    t.mass = m;
    return exact_gaussian_moment(t, {{alpha, 7, 9}});
  };
  const double v1 = moment_at_mass(0.4);
  const double v2 = moment_at_mass(0.2);
  const double v3 = moment_at_mass(0.1);
  CHECK(v2 < v1);
  CHECK(v3 < v2);
}

TEST_CASE("insufficient samples are rejected") {
  TorusSpec t = small_spec();
  MomentRequest req;
  req.samples = 10;
  CHECK_THROWS_AS(estimate_moment(t, req), domain_error);
}
