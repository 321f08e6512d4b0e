#pragma once

#include <Eigen/Dense>

#include "sgff/random.hpp"

namespace sgff {

// Synthesizes a real Gaussian field on an N x N periodic grid from a
// nonnegative spectrum indexed by wavevector (standard DFT ordering, row =
// k_x index, col = k_y index).  The exact grid covariance of the result is
//   E[f(p) f(q)] = (1/N^2) sum_k S(k) exp(2 pi i k.(p-q)/N),
// i.e. the inverse transform of the spectrum over the retained modes; no
// continuum modes beyond the grid are implied.
//
// One spectrum draw yields two independent fields (real and imaginary part
// of one complex synthesis); synthesize_pair exposes both, and
// spectral_synthesize returns the first.
void synthesize_pair(const Eigen::MatrixXd& spectrum, RandomStream stream,
                     Eigen::MatrixXd& field_a, Eigen::MatrixXd& field_b);

Eigen::MatrixXd spectral_synthesize(const Eigen::MatrixXd& spectrum, RandomStream stream);

// In-place 2-D FFT helpers over a square complex matrix.
void fft2(Eigen::MatrixXcd& m);
void ifft2(Eigen::MatrixXcd& m);

}  // namespace sgff
