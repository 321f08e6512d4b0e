#include "sgff/fredholm.hpp"

#include <cmath>

#include "sgff/errors.hpp"
#include "sgff/linalg.hpp"
#include "sgff/specfun.hpp"

namespace sgff {

void TwoPointSpec::validate() const {
  if (std::abs(alpha) >= 0.5) throw domain_error("TwoPointSpec: requires |alpha| < 1/2");
  if (mu <= 0.0) throw domain_error("TwoPointSpec: requires mu > 0");
  if (r <= 0.0) throw domain_error("TwoPointSpec: requires r > 0");
}

double log_window(double mur) {
  return std::max(8.0, std::log(200.0 / mur));
}

namespace {

// u-integral of the kernel at fixed (a, b):
//   int_0^inf du e^{-r omega(u)} (ab/u^2)^alpha / ((a+u)(b+u)).
double kernel_u_integral(const TwoPointSpec& s, double a, double b,
                         const QuadratureRule& inner) {
  const double mur = s.mu * s.r;
  // Window check: the u-integrand's exponential factor relative to its peak
  // e^{-mur} must be negligible at the rule's ends.
  const double u_lo = inner.nodes[0], u_hi = inner.nodes[inner.size() - 1];
  const double edge = std::max(std::exp(-s.r * omega(u_lo, s.mu) + mur),
                               std::exp(-s.r * omega(u_hi, s.mu) + mur));
  if (edge > 1e-14)
    throw evaluation_error("kernel_value: quadrature window too small for mu*r");

  const double log_ab = std::log(a) + std::log(b);
  double acc = 0.0;
  for (int i = 0; i < inner.size(); ++i) {
    const double u = inner.nodes[i];
    const double expo = -s.r * omega(u, s.mu) + s.alpha * (log_ab - 2.0 * std::log(u));
    acc += inner.weights[i] * std::exp(expo) / ((a + u) * (b + u));
  }
  return acc;
}

}  // namespace

double kernel_value(const TwoPointSpec& spec, double a, double b, const QuadratureRule& inner) {
  spec.validate();
  if (a <= 0.0 || b <= 0.0) throw domain_error("kernel_value: requires a, b > 0");
  if (spec.alpha == 0.0) return 0.0;
  const double sp = std::sin(M_PI * spec.alpha);
  const double pref = -sp * sp / (M_PI * M_PI);
  const double damp =
      std::exp(-0.5 * spec.r * (omega(a, spec.mu) + omega(b, spec.mu)));
  return pref * damp * kernel_u_integral(spec, a, b, inner);
}

double kernel_value(const TwoPointSpec& spec, double a, double b, int inner_nodes) {
  const QuadratureRule inner = log_halfline(inner_nodes, log_window(spec.mu * spec.r));
  return kernel_value(spec, a, b, inner);
}

DiscretizedKernel discretize(const TwoPointSpec& spec, int outer_nodes, int inner_nodes) {
  spec.validate();
  if (outer_nodes < 16 || inner_nodes < 16)
    throw domain_error("discretize: node counts must be >= 16");
  DiscretizedKernel d;
  d.spec = spec;
  const double S = log_window(spec.mu * spec.r);
  d.outer = log_halfline(outer_nodes, S);
  d.inner = log_halfline(inner_nodes, S);
  d.matrix.setZero(outer_nodes, outer_nodes);
  if (spec.alpha == 0.0) return d;

  Eigen::VectorXd sqw = d.outer.weights.array().sqrt();
  for (int i = 0; i < outer_nodes; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double k = kernel_value(spec, d.outer.nodes[i], d.outer.nodes[j], d.inner);
      d.matrix(i, j) = sqw[i] * k * sqw[j];
      d.matrix(j, i) = d.matrix(i, j);
    }
  }
  return d;
}

double log_det_one_minus_k(const TwoPointSpec& spec, int outer_nodes, int inner_nodes) {
  if (spec.alpha == 0.0) {
    spec.validate();
    return 0.0;
  }
  DiscretizedKernel d = discretize(spec, outer_nodes, inner_nodes);
  // The symmetrized matrix is real symmetric with spectrum well below 1, so
  // log det(I - M) = sum log1p(-lambda_i) over its eigenvalues.  This keeps
  // absolute accuracy ~eps * ||M|| even when the kernel norm is tiny (large
  // mu r), which a pivoted factorization of I - M cannot do.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(d.matrix, Eigen::EigenvaluesOnly);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double lambda = es.eigenvalues()[i];
    if (lambda >= 1.0)
      throw conditioning_error(
          "det_one_minus_k: discretized kernel reaches eigenvalue 1 (insufficient nodes)");
    acc += std::log1p(-lambda);
  }
  return acc;
}

double det_one_minus_k(const TwoPointSpec& spec, int outer_nodes, int inner_nodes) {
  return std::exp(log_det_one_minus_k(spec, outer_nodes, inner_nodes));
}

double two_point(const TwoPointSpec& spec, int outer_nodes, int inner_nodes) {
  spec.validate();
  if (spec.alpha == 0.0) return 1.0;
  const double a = spec.alpha;
  const double log_norm = 2.0 * a * a * std::log(0.5 * spec.mu) -
                          2.0 * barnes_g_log(a) - 2.0 * barnes_g_log(-a);
  return std::exp(log_norm + log_det_one_minus_k(spec, outer_nodes, inner_nodes));
}

double basor_tracy_c2(double alpha, double t, int nodes) {
  if (t <= 0.0) throw domain_error("basor_tracy_c2: requires t > 0");
  const double theta = 2.0 * alpha;
  const QuadratureRule rule = log_halfline(nodes, log_window(t));
  double acc = 0.0;
  for (int i = 0; i < nodes; ++i) {
    const double v1 = rule.nodes[i];
    const double e1 = std::exp(-0.5 * t * (v1 + 1.0 / v1));
    for (int j = 0; j < nodes; ++j) {
      const double v2 = rule.nodes[j];
      const double e2 = std::exp(-0.5 * t * (v2 + 1.0 / v2));
      const double ratio = std::pow(v1 / v2, theta);
      acc += rule.weights[i] * rule.weights[j] * e1 * e2 * ratio /
             ((v1 + v2) * (v1 + v2));
    }
  }
  return acc;
}

}  // namespace sgff
