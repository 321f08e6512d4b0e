#include "sgff/quadrature.hpp"

#include <cmath>
#include <sstream>

#include "sgff/errors.hpp"

namespace sgff {

QuadratureRule gauss_legendre(int n, double a, double b) {
  if (n < 1) throw domain_error("gauss_legendre: need at least one node");
  // Jacobi matrix of the Legendre recursion; its eigenvalues are the nodes
  // on [-1, 1] and the squared first eigenvector components give weights.
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    double beta = i / std::sqrt(4.0 * i * i - 1.0);
    J(i - 1, i) = beta;
    J(i, i - 1) = beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(J);
  QuadratureRule r;
  r.domain = QuadratureRule::Domain::Finite;
  r.a = a;
  r.b = b;
  r.nodes.resize(n);
  r.weights.resize(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    r.nodes[i] = mid + half * eig.eigenvalues()[i];
    double v0 = eig.eigenvectors()(0, i);
    r.weights[i] = 2.0 * v0 * v0 * half;
  }
  return r;
}

QuadratureRule log_halfline(int n, double S) {
  if (S <= 0.0) throw domain_error("log_halfline: window half-width must be positive");
  if (n < 2) throw domain_error("log_halfline: need at least two nodes");
  // Substitution a = e^s on s in [-S, S], with nodes placed by the
  // sinh-stretched midpoint rule s = sigma sinh(t): the half-line
  // integrands here decay (super)exponentially in s at both window ends,
  // for which this node placement converges geometrically.
  const double sigma = 2.0;
  const double T = std::asinh(S / sigma);
  const double h = 2.0 * T / n;
  QuadratureRule r;
  r.domain = QuadratureRule::Domain::LogHalfLine;
  r.a = -S;
  r.b = S;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const double t = -T + h * (i + 0.5);
    const double s = sigma * std::sinh(t);
    r.nodes[i] = std::exp(s);
    r.weights[i] = h * sigma * std::cosh(t) * r.nodes[i];
  }
  return r;
}

QuadratureRule periodic_circle(int n) {
  if (n < 1) throw domain_error("periodic_circle: need at least one node");
  QuadratureRule r;
  r.domain = QuadratureRule::Domain::PeriodicCircle;
  r.a = 0.0;
  r.b = 2.0 * M_PI;
  r.nodes.resize(n);
  r.weights.setConstant(n, 2.0 * M_PI / n);
  for (int i = 0; i < n; ++i) r.nodes[i] = 2.0 * M_PI * i / n;
  return r;
}

std::complex<double> integrate_1d(const std::function<std::complex<double>(double)>& f,
                                  const QuadratureRule& rule) {
  std::complex<double> acc = 0.0;
  for (int i = 0; i < rule.size(); ++i) {
    std::complex<double> v = f(rule.nodes[i]);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      std::ostringstream msg;
      msg << "integrate_1d: non-finite integrand at node " << i << " (x = " << rule.nodes[i] << ")";
      throw evaluation_error(msg.str());
    }
    acc += rule.weights[i] * v;
  }
  return acc;
}

double integrate_1d_real(const std::function<double(double)>& f, const QuadratureRule& rule) {
  double acc = 0.0;
  for (int i = 0; i < rule.size(); ++i) {
    double v = f(rule.nodes[i]);
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg << "integrate_1d: non-finite integrand at node " << i << " (x = " << rule.nodes[i] << ")";
      throw evaluation_error(msg.str());
    }
    acc += rule.weights[i] * v;
  }
  return acc;
}

}  // namespace sgff
