#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "sgff/random.hpp"

namespace sgff {

// Periodic-box surrogate for the heat-kernel regularized massive free field:
// grid N x N on [0, box)^2, UV scale eps, mass m.  The field spectrum is
//   S(k) = exp(-eps^2 (|k|^2 + m^2)) / (|k|^2 + m^2)
// over the retained torus wavevectors k = 2 pi n / box.
struct TorusSpec {
  double box = 200.0;
  int grid = 256;
  double eps = 1e-2;
  double mass = 0.05;

  double cell() const { return box / grid; }
  void validate() const;
  // m * box >= 6 keeps the wrapped tails of the covariance negligible.
  bool wrap_controlled() const { return mass * box >= 6.0; }
};

struct TorusField {
  TorusSpec spec;
  Eigen::MatrixXd values;
};

// Spectrum matrix in DFT ordering (includes the zero mode; finite since m > 0).
Eigen::MatrixXd torus_spectrum(const TorusSpec& t);

// Exact grid-point variance (spectral sum over retained modes).
double grid_variance(const TorusSpec& t);

// Exact grid covariance table: cov(di, dj) for lattice displacements.
Eigen::MatrixXd grid_covariance_table(const TorusSpec& t);

// One field draw.  m = 0 is rejected (the zero mode diverges).
TorusField sample_field(const TorusSpec& t, RandomStream stream);

// A fractional charge pinned to a grid site.
struct ChargePoint {
  double alpha = 0.0;
  int ix = 0, iy = 0;
};

// Exact Gaussian expectation of prod_j eps^{-alpha_j^2}
// exp(i sqrt(4 pi) alpha_j phi(x_j)) with the grid-truncated covariance.
double exact_gaussian_moment(const TorusSpec& t, const std::vector<ChargePoint>& charges);

// A smeared charge: winding alpha and test function given by grid values.
struct MomentCharge {
  double alpha = 0.0;
  Eigen::MatrixXd f;
};

struct MomentRequest {
  std::vector<MomentCharge> charges;
  int samples = 1000;
  RandomStream stream;
  int threads = 1;
};

struct MomentEstimate {
  std::complex<double> mean;
  double stderr_;
};

// Monte Carlo estimate of E prod_j M_{alpha_j}(f_j), with
// M_alpha(f) = eps^{-alpha^2} cell^2 sum_x exp(i sqrt(4 pi) alpha phi(x)) f(x),
// and a jackknife standard error.  Deterministic for fixed stream regardless
// of thread count (samples are indexed by substream).
MomentEstimate estimate_moment(const TorusSpec& t, const MomentRequest& req);

}  // namespace sgff
