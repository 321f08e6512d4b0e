#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <sstream>

#include "sgff/errors.hpp"

namespace sgff {

// log of the (real, positive) determinant of I - K discretizations and
// friends, by pivoted LU.  The determinant of a discretized real-symmetric
// kernel must come out real; |Im det| / |Re det| > 1e-8 or Re det <= 0 is
// reported as a conditioning problem rather than silently continued.
inline double log_det(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw domain_error("log_det: matrix must be square");
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
  // Accumulate log-magnitude and phase separately to dodge overflow.
  double log_mag = 0.0;
  std::complex<double> phase = lu.permutationP().determinant();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::complex<double> u = lu.matrixLU()(i, i);
    double a = std::abs(u);
    if (a == 0.0) {
      std::ostringstream msg;
      msg << "log_det: zero pivot at index " << i;
      throw conditioning_error(msg.str());
    }
    log_mag += std::log(a);
    phase *= u / a;
  }
  if (std::abs(phase.imag()) > 1e-8 * std::max(std::abs(phase.real()), 1e-300)) {
    throw conditioning_error("log_det: determinant has a non-negligible imaginary part");
  }
  if (phase.real() <= 0.0) {
    throw conditioning_error("log_det: determinant is not positive");
  }
  return log_mag + std::log(phase.real());
}

inline double log_det(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw domain_error("log_det: matrix must be square");
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  double log_mag = 0.0;
  double sign = lu.permutationP().determinant();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    double u = lu.matrixLU()(i, i);
    if (u == 0.0) {
      std::ostringstream msg;
      msg << "log_det: zero pivot at index " << i;
      throw conditioning_error(msg.str());
    }
    log_mag += std::log(std::abs(u));
    sign *= (u < 0.0 ? -1.0 : 1.0);
  }
  if (sign <= 0.0) throw conditioning_error("log_det: determinant is not positive");
  return log_mag;
}

// Dense solve with a residual check; throws on singular-to-working-precision
// pivots, reporting the pivot index.
inline Eigen::VectorXcd solve_dense(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& b) {
  if (A.rows() != A.cols()) throw domain_error("solve_dense: matrix must be square");
  if (A.rows() != b.size()) throw domain_error("solve_dense: dimension mismatch");
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
  double max_pivot = 0.0;
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    max_pivot = std::max(max_pivot, std::abs(lu.matrixLU()(i, i)));
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    double p = std::abs(lu.matrixLU()(i, i));
    if (p <= 1e-14 * max_pivot) {
      std::ostringstream msg;
      msg << "solve_dense: singular pivot at index " << i;
      throw conditioning_error(msg.str());
    }
  }
  return lu.solve(b);
}

}  // namespace sgff
