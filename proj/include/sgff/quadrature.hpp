#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>

namespace sgff {

// One-dimensional quadrature rule.  Nodes and weights are stored in the
// variable the integrand sees, i.e. after any change of variables, so
// integrate_1d is always a plain weighted sum.
struct QuadratureRule {
  enum class Domain { Finite, LogHalfLine, PeriodicCircle };

  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
  Domain domain = Domain::Finite;
  double a = 0.0, b = 0.0;   // finite interval, or [-S, S] before the log map

  int size() const { return static_cast<int>(nodes.size()); }
};

// Gauss-Legendre rule on [a, b] via the Golub-Welsch eigenvalue method.
QuadratureRule gauss_legendre(int n, double a, double b);

// Rule for integrals over (0, infinity) under the substitution a = e^s with
// s restricted to the symmetric window [-S, S]:
//   int_0^inf f(a) da  ~=  sum_i w_i f(a_i),   a_i = e^{s_i},  w_i = v_i e^{s_i},
// with (s_i, v_i) Gauss-Legendre on [-S, S].  Callers choose S so that the
// integrand is below ~1e-14 in magnitude at the window ends.
QuadratureRule log_halfline(int n, double S);

// Equispaced full-period rule on [0, 2*pi); exact for trigonometric
// polynomials of degree < n.
QuadratureRule periodic_circle(int n);

// Weighted sum of f over the rule's nodes.  Throws evaluation_error naming
// the offending node if f returns a non-finite value there.
std::complex<double> integrate_1d(const std::function<std::complex<double>(double)>& f,
                                  const QuadratureRule& rule);

double integrate_1d_real(const std::function<double(double)>& f, const QuadratureRule& rule);

}  // namespace sgff
