#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace sgff {

using Complex = std::complex<double>;

// Monodromy data: punctures x_j with windings alpha_j in (-1/2, 1/2),
// encoding the branching function rho(z) = prod_j (z - x_j)^{alpha_j}.
struct BranchConfig {
  std::vector<Complex> punctures;
  std::vector<double> windings;

  int size() const { return static_cast<int>(punctures.size()); }
  double winding_sum() const;
  bool neutral() const;
  void validate() const;

  // Windings negated (the 1/rho configuration).
  BranchConfig inverse() const;
};

// |rho(z)|^2 = prod_j |z - x_j|^{2 alpha_j}.  Cut-free.
double abs_rho_sq(const BranchConfig& cfg, Complex z);

// rho(z) with each log branch cut along the positive real direction from
// its puncture (argument in [0, 2 pi)).
Complex rho(const BranchConfig& cfg, Complex z);

// Massless fractional correlation
//   (2 e^{-gamma/2})^{sum alpha_j^2} prod_{j<k} |x_j - x_k|^{2 alpha_j alpha_k},
// and 0 for non-neutral configurations.
double gff_fractional_correlation(const BranchConfig& cfg);

// Massless partition-function normalization prod_{r<s} |x_r-x_s|^{2 a_r a_s};
// requires neutrality.
double z_rho_zero(const BranchConfig& cfg);

// d/dx_j log z_rho_zero = alpha_j sum_{i != j} alpha_i / (x_j - x_i).
Complex z_rho_zero_log_deriv(const BranchConfig& cfg, int j);

// Massless twisted Dirac Green's function (off-diagonal matrix).
Eigen::Matrix2cd s0_green(const BranchConfig& cfg, Complex z, Complex w);

// (4 e^{-gamma})^p prod_l |rho(w_l)|^2/|rho(w'_l)|^2
//   * prod_{r<s} |w_r-w_s|^2 |w'_r-w'_s|^2 / prod_{r,s} |w_r-w'_s|^2;
// returns 0 for unbalanced charge counts.
double charge_correlation_rho(const BranchConfig& cfg, const std::vector<Complex>& plus,
                              const std::vector<Complex>& minus);

// Fermionic route to the same object: (2 pi)^{-2p} prod |rho|^2 ratios
// times |det(1/(w_l - w'_{l'}))|^2.
double fermion_bilinear_correlation(const BranchConfig& cfg, const std::vector<Complex>& plus,
                                    const std::vector<Complex>& minus);

// Momentum-space cumulant kernel query: order n >= 2, n-1 wavevectors
// (R^2 identified with C), mass mu.
struct CumulantQuery {
  int n = 2;
  std::vector<Complex> momenta;
  double mu = 1.0;

  void validate() const;
};

// C^T_mu(p_1, ..., p_{n-1}) =
//   -((-i sqrt(pi))/(2 pi^2))^n (n-1)! / (p_1 ... p_{n-1} (-p_1-...-p_{n-1}))
//   * int_C dq prod_{j=0}^{n-1} (q + P_j) / (|q + P_j|^2 + mu^2),
// with P_j the partial momentum sums.  The conditionally convergent tail is
// handled angular-first: a full-period equispaced rule in the angle (which
// annihilates the rotating large-|q| terms) and a log-mapped radial rule
// with cutoff chosen so the estimated tail is below 1e-8.
Complex cumulant_kernel(const CumulantQuery& q, int radial_nodes = 192, int angular_nodes = 256);

}  // namespace sgff
