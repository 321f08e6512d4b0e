#pragma once

#include <Eigen/Dense>

namespace sgff {

// Log-uniform samples of Sigma(r) = log of the normalized two-point
// function, the input of the differential-equation consistency checks.
struct RadialProfile {
  Eigen::VectorXd r;       // strictly increasing, uniform in log r
  Eigen::VectorXd sigma;   // Sigma(r_i)
  double alpha = 0.0;
  double mu = 1.0;

  void validate() const;
  // log-spacing step
  double step() const;
};

// psi on the interior nodes of a profile.
struct PsiProfile {
  Eigen::VectorXd r;
  Eigen::VectorXd psi;
};

// Recovers psi(r) = 1/2 arccos(1 - (2/mu^2) Lap Sigma) on the interior
// nodes, with Lap Sigma = Sigma'' + Sigma'/r computed by central
// differences in log r.  Values of (2/mu^2) Lap Sigma outside [0, 2] by
// more than 1e-3 are a consistency error; smaller excursions are clamped.
PsiProfile extract_psi(const RadialProfile& p);

// Pointwise normalized residuals on the interior nodes of psi (and the
// corresponding radii); the scalar versions below take the max.
struct ResidualProfile {
  Eigen::VectorXd r;
  Eigen::VectorXd residual;
};

ResidualProfile ode_residual_profile(const PsiProfile& psi, double alpha, double mu);
ResidualProfile palmer_residual_profile(const RadialProfile& p, const PsiProfile& psi,
                                        double alpha, double mu);

// Max normalized residual of
//   (d_r^2 + r^{-1} d_r) psi = mu^2/2 sin(2 psi) + (2 alpha)^2/r^2 tan(psi)(1 + tan^2 psi)
// over the interior nodes of psi; normalization |LHS - RHS|/(|LHS|+|RHS|+mu^2).
double ode_residual(const PsiProfile& psi, double alpha, double mu);

// Max normalized residual of the first-order relation
//   d_r Sigma = -(1/2r) ( r^2 psi'^2 - (2 alpha)^2 tan^2 psi - mu^2 r^2 sin^2 psi ),
// with Sigma' and psi' by central differences.  Only d_r Sigma enters, so
// any r-independent normalization constant in Sigma drops out.
double palmer_first_order_residual(const RadialProfile& p, const PsiProfile& psi, double alpha,
                                   double mu);

}  // namespace sgff
