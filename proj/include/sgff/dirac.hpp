#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "sgff/free_field.hpp"

namespace sgff {

// Cartesian cell covering of the disk {|z| < L}: squares of side h whose
// centers lie strictly inside the disk, with base cells within 3h of a
// refinement point (the punctures) split into k x k subcells.  cells_across
// must be even so a puncture on a lattice axis can never coincide with a
// cell center.
struct DiskMesh {
  double radius = 4.0;
  double cell = 0.25;   // base cell side h
  int cells_across = 32;
  int refine_k = 4;
  std::vector<Complex> centers;
  std::vector<double> areas;
  std::vector<double> sides;

  static DiskMesh build(double radius, int cells_across, int refine_k = 4,
                        const std::vector<Complex>& refine_points = {});

  int size() const { return static_cast<int>(centers.size()); }
  // Index of the (possibly refined) cell containing p, or -1 outside.
  int cell_index(Complex p) const;

 private:
  std::vector<int> lattice_;       // (ix, iy) -> cell id, first child id, or -1
  std::vector<bool> refined_;      // per lattice slot
};

// Cell-averaged |rho|^{+2} and |rho|^{-2} for a branch configuration; cells
// within 3h of a puncture are averaged over refine_k x refine_k subcells.
struct DiracAssembly {
  const DiskMesh* mesh = nullptr;
  BranchConfig cfg;
  Eigen::VectorXd rho2;
  Eigen::VectorXd rho2inv;

  static DiracAssembly build(const DiskMesh& mesh, const BranchConfig& cfg);
};

// Which winding orientation a solve uses: rho, 1/rho, or no twisting.
enum class Winding { Rho, InvRho, One };

// Systems up to this size factorize densely (Cholesky); larger single-source
// solves fall back to matrix-free conjugate gradients.
extern int dirac_dense_cutoff;

// Discretization of the regular-part integral equation (I - K) Delta = h for
// one (mesh, configuration, orientation); the mass enters only as a scalar,
// so one assembly serves every mass value.  The solver works in the weighted
// similarity frame: with D1 = diag(A |rho|^2), D2 = diag(A |rho|^{-2}), K is
// skew-adjoint, so
//   I - K21 K12 = D2^{-1/2} (I + mu^2 B B^H) D2^{1/2}
// with B the unit-mass scaled Cauchy operator, and I + mu^2 B B^H is
// Hermitian positive definite.  Small systems use Cholesky (one rank update
// shared across masses); large single-source solves use conjugate gradients.
class DiracOperator {
 public:
  DiracOperator(const DiracAssembly& assembly, Winding orientation);

  int size() const { return mesh_->size(); }
  const DiskMesh& mesh() const { return *mesh_; }
  const Eigen::VectorXd& rho2() const { return rho2_; }
  const Eigen::VectorXd& rho2inv() const { return rho2inv_; }

  // Regular parts Delta_11(., w), Delta_21(., w) on cell centers at mass mu.
  void solve_source(Complex w, double mu, Eigen::VectorXcd& delta11,
                    Eigen::VectorXcd& delta21) const;

  // diag_q of Delta_11(u_q, u_q) over all cell-center sources, with one
  // factorization shared across the right-hand sides.
  Eigen::VectorXcd delta11_diagonal_all_sources(double mu) const;

  // H(z, w) = sum_v A_v |rho(u_v)|^{-2} / (conj(z - u_v) (u_v - w)),
  // subcell-refined near z, w, and the punctures.
  Complex double_cauchy(Complex z, Complex w) const;

  // H(u_i, w) for every cell center u_i (self-cell excluded).
  Eigen::VectorXcd double_cauchy_column(Complex w) const;

  // Second component of h(., w) at mass mu (first component vanishes).
  Eigen::VectorXcd build_h2(Complex w, double mu) const;

 private:
  Eigen::VectorXcd source_kernel(Complex w) const;
  Eigen::VectorXcd solve_normal(const Eigen::VectorXcd& rhs, double mu) const;
  void ensure_gram() const;

  const DiskMesh* mesh_;
  BranchConfig cfg_;
  Eigen::VectorXd rho2_, rho2inv_;   // oriented: rho2_ multiplies K21
  Eigen::VectorXd d1s_, d2s_;        // sqrt(A rho2), sqrt(A rho2inv)
  Eigen::MatrixXcd B_;               // unit-mass operator
  mutable Eigen::MatrixXcd gram_;    // B B^H (dense path only)
  mutable bool gram_ready_ = false;
  mutable Eigen::LLT<Eigen::MatrixXcd> llt_;
  mutable double llt_mass_ = 0.0;
  mutable bool llt_ready_ = false;
  bool use_llt_ = true;
};

// Regular parts of the Green's function for both orientations, for a fixed
// source w.  mu = 0 has identically vanishing regular parts.
struct GreenSolution {
  const DiskMesh* mesh = nullptr;
  BranchConfig cfg;
  double mu = 0.0;
  Complex w;
  Eigen::VectorXcd d11_rho, d21_rho;
  Eigen::VectorXcd d11_inv, d21_inv;
};

Eigen::VectorXcd build_h(const DiskMesh& mesh, const BranchConfig& cfg, double mu, Complex w);

GreenSolution solve_green(const DiskMesh& mesh, const BranchConfig& cfg, double mu, Complex w);

// Full 2x2 S(z, w) from a solution: the first column from the rho solve and
// the second column by conjugation of the winding-negated solve.  Delta is
// interpolated bilinearly between cell centers.
Eigen::Matrix2cd reconstruct_s(const GreenSolution& sol, Complex z);

// d/dx_j log Ztilde_rho(mu chi) = -2 pi alpha_j lim_{z,w -> x_j} Delta_21(z, w).
// Evaluated through the branch-point factorization identity integrated in the
// mass, which trades the coincident limit at the puncture for quadrature of
// an integrable singularity over the disk:
//   d/dx_j log Ztilde = 4 pi alpha_j int_0^mu ds int du
//     |rho(u)|^2 [ -s H(u, x_j)/(2pi)^2 + Delta_11(u, x_j; s) ]
//                [ 1/(2pi (x_j - u)) - Delta~_21(u, x_j; s) ],
// where Delta~_21 is the winding-negated field carrying the row limit
// Delta_21(x_j, u) = -Delta~_21(u, x_j).
Complex log_deriv_branch(const DiskMesh& mesh, const BranchConfig& cfg, double mu, int j,
                         int mass_nodes = 6);

struct LogZTilde {
  double value = 0.0;       // log Ztilde
  double imag_ratio = 0.0;  // |Im| / |Re| of the accumulated integrand
};

// log Ztilde(mu chi) by Gauss-Legendre quadrature of the mass integral; the
// resolvent diagonal at each mass node is computed with one factorization per
// orientation shared across all sources.
LogZTilde log_z_tilde(const DiskMesh& mesh, const BranchConfig& cfg, double mu,
                      int mass_nodes = 8);

// Relative residual between the holomorphic central difference of S(z, w) in
// the branch point x_j and the factorized outer-product limit formula.
double factorization_residual(const DiskMesh& mesh, const BranchConfig& cfg, double mu, int j,
                              Complex z, Complex w, double delta);

}  // namespace sgff
