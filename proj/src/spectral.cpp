#include "sgff/spectral.hpp"

#include <unsupported/Eigen/FFT>

#include "sgff/errors.hpp"

namespace sgff {

namespace {

void transform(Eigen::MatrixXcd& m, bool forward) {
  const Eigen::Index n = m.rows();
  Eigen::FFT<double> fft;
  Eigen::VectorXcd in(n), out(n);
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    in = m.col(j);
    if (forward)
      fft.fwd(out, in);
    else
      fft.inv(out, in);
    m.col(j) = out;
  }
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    in = m.row(i).transpose();
    if (forward)
      fft.fwd(out, in);
    else
      fft.inv(out, in);
    m.row(i) = out.transpose();
  }
}

}  // namespace

void fft2(Eigen::MatrixXcd& m) { transform(m, true); }
void ifft2(Eigen::MatrixXcd& m) { transform(m, false); }

void synthesize_pair(const Eigen::MatrixXd& spectrum, RandomStream stream,
                     Eigen::MatrixXd& field_a, Eigen::MatrixXd& field_b) {
  const Eigen::Index n = spectrum.rows();
  if (spectrum.cols() != n) throw domain_error("synthesize_pair: spectrum must be square");
  if ((spectrum.array() < 0.0).any())
    throw domain_error("synthesize_pair: spectrum entries must be nonnegative");

  // Unconstrained complex normals; Re and Im of the back-transform are two
  // independent real fields with the prescribed covariance.
  CounterRng rng(stream);
  Eigen::MatrixXcd coef(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) {
      const double amp = std::sqrt(spectrum(i, j));
      const double re = rng.normal();
      const double im = rng.normal();
      coef(i, j) = std::complex<double>(amp * re, amp * im);
    }
  ifft2(coef);
  // Eigen's inv applies 1/N per axis; the covariance convention above needs
  // a single overall 1/N, so scale back by N.
  coef *= static_cast<double>(n);
  field_a = coef.real();
  field_b = coef.imag();
}

Eigen::MatrixXd spectral_synthesize(const Eigen::MatrixXd& spectrum, RandomStream stream) {
  Eigen::MatrixXd a, b;
  synthesize_pair(spectrum, stream, a, b);
  return a;
}

}  // namespace sgff
