#include "sgff/painleve.hpp"

#include <cmath>
#include <sstream>

#include "sgff/errors.hpp"

namespace sgff {

void RadialProfile::validate() const {
  if (r.size() < 7) throw domain_error("RadialProfile: needs at least 7 nodes");
  if (r.size() != sigma.size()) throw domain_error("RadialProfile: size mismatch");
  if (mu <= 0.0) throw domain_error("RadialProfile: requires mu > 0");
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    if (!(r[i] > 0.0)) throw domain_error("RadialProfile: nodes must be positive");
    if (!std::isfinite(sigma[i])) throw domain_error("RadialProfile: non-finite Sigma sample");
  }
  const double h = std::log(r[1]) - std::log(r[0]);
  for (Eigen::Index i = 1; i + 1 < r.size(); ++i) {
    const double hi = std::log(r[i + 1]) - std::log(r[i]);
    if (std::abs(hi - h) > 1e-8 * h)
      throw domain_error("RadialProfile: nodes must be uniform in log r");
  }
}

double RadialProfile::step() const { return std::log(r[1]) - std::log(r[0]); }

PsiProfile extract_psi(const RadialProfile& p) {
  p.validate();
  const double h = p.step();
  const Eigen::Index n = p.r.size();
  PsiProfile out;
  out.r.resize(n - 2);
  out.psi.resize(n - 2);
  const double slack = 1e-3;
  for (Eigen::Index i = 1; i + 1 < n; ++i) {
    // Lap Sigma = (d^2/dl^2 Sigma) / r^2 in the log variable l = log r.
    const double d2 = (p.sigma[i + 1] - 2.0 * p.sigma[i] + p.sigma[i - 1]) / (h * h);
    const double lap = d2 / (p.r[i] * p.r[i]);
    double x = 2.0 * lap / (p.mu * p.mu);
    if (x < -slack || x > 2.0 + slack) {
      std::ostringstream msg;
      msg << "extract_psi: (2/mu^2) Lap Sigma = " << x << " outside [0, 2] at r = " << p.r[i];
      throw consistency_error(msg.str());
    }
    x = std::min(std::max(x, 0.0), 2.0);
    out.r[i - 1] = p.r[i];
    out.psi[i - 1] = 0.5 * std::acos(1.0 - x);
  }
  return out;
}

ResidualProfile ode_residual_profile(const PsiProfile& psi, double alpha, double mu) {
  if (psi.r.size() < 5) throw domain_error("ode_residual: needs at least 5 interior nodes");
  const double h = std::log(psi.r[1]) - std::log(psi.r[0]);
  ResidualProfile out;
  out.r.resize(psi.r.size() - 2);
  out.residual.resize(psi.r.size() - 2);
  for (Eigen::Index i = 1; i + 1 < psi.r.size(); ++i) {
    const double r = psi.r[i];
    const double v = psi.psi[i];
    if (std::abs(v - 0.5 * M_PI) < 1e-3)
      throw evaluation_error("ode_residual: psi too close to pi/2 (tan blowup)");
    const double lap = (psi.psi[i + 1] - 2.0 * v + psi.psi[i - 1]) / (h * h) / (r * r);
    const double tn = std::tan(v);
    const double rhs = 0.5 * mu * mu * std::sin(2.0 * v) +
                       (4.0 * alpha * alpha) / (r * r) * tn * (1.0 + tn * tn);
    out.r[i - 1] = r;
    out.residual[i - 1] = std::abs(lap - rhs) / (std::abs(lap) + std::abs(rhs) + mu * mu);
  }
  return out;
}

double ode_residual(const PsiProfile& psi, double alpha, double mu) {
  const ResidualProfile prof = ode_residual_profile(psi, alpha, mu);
  return prof.residual.size() ? prof.residual.maxCoeff() : 0.0;
}

ResidualProfile palmer_residual_profile(const RadialProfile& p, const PsiProfile& psi,
                                        double alpha, double mu) {
  p.validate();
  if (psi.r.size() < 5)
    throw domain_error("palmer_first_order_residual: needs at least 5 interior nodes");
  const double h = p.step();
  const double lambda = 2.0 * alpha;
  ResidualProfile out;
  out.r.resize(psi.r.size() - 2);
  out.residual.resize(psi.r.size() - 2);
  // psi index k corresponds to profile index k+1.
  for (Eigen::Index k = 1; k + 1 < psi.r.size(); ++k) {
    const Eigen::Index i = k + 1;
    const double r = p.r[i];
    const double v = psi.psi[k];
    if (std::abs(v - 0.5 * M_PI) < 1e-3)
      throw evaluation_error("palmer_first_order_residual: psi too close to pi/2");
    const double dsigma = (p.sigma[i + 1] - p.sigma[i - 1]) / (2.0 * h) / r;
    const double dpsi = (psi.psi[k + 1] - psi.psi[k - 1]) / (2.0 * h) / r;
    const double tn = std::tan(v), sn = std::sin(v);
    const double rhs = -(1.0 / (2.0 * r)) * (r * r * dpsi * dpsi - lambda * lambda * tn * tn -
                                             mu * mu * r * r * sn * sn);
    out.r[k - 1] = r;
    out.residual[k - 1] =
        std::abs(dsigma - rhs) / (std::abs(dsigma) + std::abs(rhs) + mu * mu);
  }
  return out;
}

double palmer_first_order_residual(const RadialProfile& p, const PsiProfile& psi, double alpha,
                                   double mu) {
  const ResidualProfile prof = palmer_residual_profile(p, psi, alpha, mu);
  return prof.residual.size() ? prof.residual.maxCoeff() : 0.0;
}

}  // namespace sgff
