#include "sgff/free_field.hpp"

#include <cmath>

#include "sgff/errors.hpp"
#include "sgff/quadrature.hpp"
#include "sgff/specfun.hpp"

namespace sgff {

double BranchConfig::winding_sum() const {
  double s = 0.0;
  for (double a : windings) s += a;
  return s;
}

bool BranchConfig::neutral() const { return std::abs(winding_sum()) <= 1e-12; }

void BranchConfig::validate() const {
  if (punctures.size() != windings.size())
    throw domain_error("BranchConfig: punctures/windings size mismatch");
  for (double a : windings)
    if (std::abs(a) >= 0.5) throw domain_error("BranchConfig: requires |alpha| < 1/2");
  for (size_t i = 0; i < punctures.size(); ++i)
    for (size_t j = i + 1; j < punctures.size(); ++j)
      if (std::abs(punctures[i] - punctures[j]) <= 1e-10)
        throw domain_error("BranchConfig: punctures must be distinct");
}

BranchConfig BranchConfig::inverse() const {
  BranchConfig c = *this;
  for (double& a : c.windings) a = -a;
  return c;
}

double abs_rho_sq(const BranchConfig& cfg, Complex z) {
  double log_val = 0.0;
  for (int j = 0; j < cfg.size(); ++j) {
    const double d = std::abs(z - cfg.punctures[j]);
    if (d <= 1e-14) {
      if (cfg.windings[j] < 0.0) throw domain_error("abs_rho_sq: pole at a puncture");
      if (cfg.windings[j] > 0.0) return 0.0;
      continue;
    }
    log_val += 2.0 * cfg.windings[j] * std::log(d);
  }
  return std::exp(log_val);
}

Complex rho(const BranchConfig& cfg, Complex z) {
  // Branch cut of each log along the positive real direction from the
  // puncture: argument in [0, 2 pi).
  Complex log_rho = 0.0;
  for (int j = 0; j < cfg.size(); ++j) {
    const Complex d = z - cfg.punctures[j];
    if (std::abs(d) <= 1e-14) throw domain_error("rho: evaluation at a puncture");
    double arg = std::atan2(d.imag(), d.real());
    if (arg < 0.0) arg += 2.0 * M_PI;
    log_rho += cfg.windings[j] * Complex(std::log(std::abs(d)), arg);
  }
  return std::exp(log_rho);
}

double gff_fractional_correlation(const BranchConfig& cfg) {
  cfg.validate();
  if (!cfg.neutral()) return 0.0;
  double sum_a2 = 0.0;
  for (double a : cfg.windings) sum_a2 += a * a;
  double log_val = sum_a2 * std::log(2.0 * std::exp(-0.5 * kEulerGamma));
  for (int j = 0; j < cfg.size(); ++j)
    for (int k = j + 1; k < cfg.size(); ++k)
      log_val += 2.0 * cfg.windings[j] * cfg.windings[k] *
                 std::log(std::abs(cfg.punctures[j] - cfg.punctures[k]));
  return std::exp(log_val);
}

double z_rho_zero(const BranchConfig& cfg) {
  cfg.validate();
  if (!cfg.neutral()) throw domain_error("z_rho_zero: configuration must be neutral");
  double log_val = 0.0;
  for (int r = 0; r < cfg.size(); ++r)
    for (int s = r + 1; s < cfg.size(); ++s)
      log_val += 2.0 * cfg.windings[r] * cfg.windings[s] *
                 std::log(std::abs(cfg.punctures[r] - cfg.punctures[s]));
  return std::exp(log_val);
}

Complex z_rho_zero_log_deriv(const BranchConfig& cfg, int j) {
  cfg.validate();
  Complex acc = 0.0;
  for (int i = 0; i < cfg.size(); ++i) {
    if (i == j) continue;
    acc += cfg.windings[i] / (cfg.punctures[j] - cfg.punctures[i]);
  }
  return cfg.windings[j] * acc;
}

Eigen::Matrix2cd s0_green(const BranchConfig& cfg, Complex z, Complex w) {
  if (std::abs(z - w) <= 1e-14) throw domain_error("s0_green: z = w is singular");
  const Complex rz = rho(cfg, z), rw = rho(cfg, w);
  Eigen::Matrix2cd s = Eigen::Matrix2cd::Zero();
  const double two_pi = 2.0 * M_PI;
  s(0, 1) = std::conj(rz) / std::conj(rw) / (two_pi * std::conj(z - w));
  s(1, 0) = rw / rz / (two_pi * (z - w));
  return s;
}

namespace {

void check_points(const BranchConfig& cfg, const std::vector<Complex>& plus,
                  const std::vector<Complex>& minus) {
  std::vector<Complex> all = plus;
  all.insert(all.end(), minus.begin(), minus.end());
  for (size_t i = 0; i < all.size(); ++i) {
    for (size_t j = i + 1; j < all.size(); ++j)
      if (std::abs(all[i] - all[j]) <= 1e-12)
        throw domain_error("charge correlation: coincident insertion points");
    for (int j = 0; j < cfg.size(); ++j)
      if (std::abs(all[i] - cfg.punctures[j]) <= 1e-12)
        throw domain_error("charge correlation: insertion at a puncture");
  }
}

}  // namespace

double charge_correlation_rho(const BranchConfig& cfg, const std::vector<Complex>& plus,
                              const std::vector<Complex>& minus) {
  cfg.validate();
  if (plus.size() != minus.size()) return 0.0;
  check_points(cfg, plus, minus);
  const int p = static_cast<int>(plus.size());
  if (p == 0) return 1.0;
  double log_val = p * std::log(4.0 * std::exp(-kEulerGamma));
  for (int l = 0; l < p; ++l)
    log_val += std::log(abs_rho_sq(cfg, plus[l])) - std::log(abs_rho_sq(cfg, minus[l]));
  for (int r = 0; r < p; ++r)
    for (int s = r + 1; s < p; ++s)
      log_val += 2.0 * std::log(std::abs(plus[r] - plus[s])) +
                 2.0 * std::log(std::abs(minus[r] - minus[s]));
  for (int r = 0; r < p; ++r)
    for (int s = 0; s < p; ++s) log_val -= 2.0 * std::log(std::abs(plus[r] - minus[s]));
  return std::exp(log_val);
}

double fermion_bilinear_correlation(const BranchConfig& cfg, const std::vector<Complex>& plus,
                                    const std::vector<Complex>& minus) {
  cfg.validate();
  if (plus.size() != minus.size()) return 0.0;
  check_points(cfg, plus, minus);
  const int p = static_cast<int>(plus.size());
  if (p == 0) return 1.0;
  Eigen::MatrixXcd cauchy(p, p);
  for (int l = 0; l < p; ++l)
    for (int m = 0; m < p; ++m) cauchy(l, m) = 1.0 / (plus[l] - minus[m]);
  const Complex det = cauchy.determinant();
  double val = std::norm(det) * std::pow(2.0 * M_PI, -2.0 * p);
  for (int l = 0; l < p; ++l) val *= abs_rho_sq(cfg, plus[l]) / abs_rho_sq(cfg, minus[l]);
  return val;
}

void CumulantQuery::validate() const {
  if (n < 2) throw domain_error("CumulantQuery: order must be >= 2");
  if (static_cast<int>(momenta.size()) != n - 1)
    throw domain_error("CumulantQuery: needs n-1 momenta");
  Complex total = 0.0;
  for (const Complex& p : momenta) {
    if (std::abs(p) <= 0.0) throw domain_error("CumulantQuery: zero momentum");
    total += p;
  }
  if (std::abs(total) <= 0.0) throw domain_error("CumulantQuery: zero total momentum");
}

Complex cumulant_kernel(const CumulantQuery& q, int radial_nodes, int angular_nodes) {
  q.validate();
  const int n = q.n;
  // Partial sums P_0 = 0, P_j = p_1 + ... + p_j.
  std::vector<Complex> part(n, 0.0);
  double scale = std::max(1.0, std::abs(q.mu));
  for (int j = 1; j < n; ++j) {
    part[j] = part[j - 1] + q.momenta[j - 1];
    scale = std::max(scale, std::abs(part[j]));
  }

  const double r_max = 3e4 * scale;
  const QuadratureRule radial = log_halfline(radial_nodes, 0.5 * (std::log(r_max) + 12.0));
  // log_halfline is symmetric about s = 0; shift so the window is
  // [-12, log(r_max)] instead.
  const double shift = 0.5 * (std::log(r_max) - 12.0);
  const QuadratureRule angular = periodic_circle(angular_nodes);

  const double mu2 = q.mu * q.mu;
  Complex integral = 0.0;
  double outer_shell = 0.0;
  for (int i = 0; i < radial.size(); ++i) {
    const double r = radial.nodes[i] * std::exp(shift);
    Complex ang = 0.0;
    for (int a = 0; a < angular.size(); ++a) {
      const double th = angular.nodes[a];
      const Complex c_q(r * std::cos(th), r * std::sin(th));
      Complex num = 1.0;
      double den = 1.0;
      for (int j = 0; j < n; ++j) {
        const Complex s = c_q + part[j];
        num *= s;
        den *= std::norm(s) + mu2;
      }
      ang += angular.weights[a] * num / den;
    }
    const Complex shell = radial.weights[i] * std::exp(shift) * r * ang;
    integral += shell;
    if (i == radial.size() - 1) outer_shell = std::abs(r * ang) * r;
  }
  // Tail bound: angular-averaged integrand decays at least like 1/r^3, so
  // the truncated mass beyond r_max is about |r g(r)| * r at the edge.
  if (outer_shell > 1e-8 * (1.0 + std::abs(integral)))
    throw evaluation_error("cumulant_kernel: radial cutoff too small for tail bound 1e-8");

  // -((-i sqrt(pi))/(2 pi^2))^n (n-1)! / (p_1 ... p_{n-1} (-sum)).
  Complex pref = -1.0;
  const Complex base = Complex(0.0, -1.0) * std::sqrt(M_PI) / (2.0 * M_PI * M_PI);
  for (int j = 0; j < n; ++j) pref *= base;
  for (int j = 2; j < n; ++j) pref *= j;  // (n-1)!
  for (const Complex& p : q.momenta) pref /= p;
  pref /= -part[n - 1];
  return pref * integral;
}

}  // namespace sgff
