#pragma once

#include <Eigen/Dense>

#include "sgff/quadrature.hpp"

namespace sgff {

// Parameters of the two-point kernel.  Only (mu * r, alpha) enter the
// determinant; mu and r are kept separate for the normalization factors.
struct TwoPointSpec {
  double alpha = 0.0;
  double mu = 1.0;
  double r = 1.0;

  void validate() const;
};

// Symmetrized Nystrom discretization sqrt(w) K sqrt(w) of the two-point
// kernel on a log-mapped half-line rule.
struct DiscretizedKernel {
  TwoPointSpec spec;
  QuadratureRule outer;
  QuadratureRule inner;
  Eigen::MatrixXd matrix;
};

// Half-window S of the log substitution a = e^s, chosen so that
// exp(-(mu r / 4) e^S) < 1e-16: the kernel's own decay kills both tails.
double log_window(double mur);

// Kernel value K(a, b) for the spec, with the u-integral evaluated on the
// given log-mapped rule.  Real and <= 0; identically 0 at alpha = 0.
double kernel_value(const TwoPointSpec& spec, double a, double b, const QuadratureRule& inner);

// Convenience overload choosing the inner rule from the spec.
double kernel_value(const TwoPointSpec& spec, double a, double b, int inner_nodes = 128);

DiscretizedKernel discretize(const TwoPointSpec& spec, int outer_nodes, int inner_nodes);

// det(I - K) by pivoted factorization of the symmetrized Nystrom matrix.
double det_one_minus_k(const TwoPointSpec& spec, int outer_nodes = 128, int inner_nodes = 128);
double log_det_one_minus_k(const TwoPointSpec& spec, int outer_nodes = 128,
                           int inner_nodes = 128);

// Normalized two-point function
//   (mu/2)^{2 alpha^2} exp(-2 log G(1+alpha) - 2 log G(1-alpha)) det(I - K),
// which tends to r^{-2 alpha^2} as r -> 0 and to the squared one-point
// function as r -> infinity.
double two_point(const TwoPointSpec& spec, int outer_nodes = 128, int inner_nodes = 128);

// Leading small-coupling coefficient c_2(t, theta) of the expansion
// log det(I - K) = sum_k -(lambda^2)^k c_{2k} / k at lambda^2 = -sin^2(pi
// alpha)/pi^2, theta = 2 alpha, t = mu r; evaluated by 2-D log-mapped
// quadrature.
double basor_tracy_c2(double alpha, double t, int nodes = 96);

}  // namespace sgff
