#include "sgff/gmc.hpp"

#include <cmath>
#include <thread>

#include "sgff/errors.hpp"
#include "sgff/spectral.hpp"

namespace sgff {

void TorusSpec::validate() const {
  if (box <= 0.0) throw domain_error("TorusSpec: box must be positive");
  if (grid < 2 || grid % 2 != 0) throw domain_error("TorusSpec: grid must be even and >= 2");
  if (mass <= 0.0) throw domain_error("TorusSpec: mass must be positive (zero mode diverges)");
  if (eps < box / grid) throw domain_error("TorusSpec: eps below the grid spacing");
}

Eigen::MatrixXd torus_spectrum(const TorusSpec& t) {
  t.validate();
  const int n = t.grid;
  const double dk = 2.0 * M_PI / t.box;
  Eigen::MatrixXd s(n, n);
  for (int j = 0; j < n; ++j) {
    const int nj = j <= n / 2 ? j : j - n;
    for (int i = 0; i < n; ++i) {
      const int ni = i <= n / 2 ? i : i - n;
      const double k2 = dk * dk * (ni * ni + nj * nj);
      const double m2 = t.mass * t.mass;
      // Continuum spectral density scaled to the DFT covariance convention:
      // cov = (1/box^2) sum_k S_cont(k) e^{ik(x-y)} = (1/N^2) sum S_dft.
      s(i, j) = (n / t.box) * (n / t.box) * std::exp(-t.eps * t.eps * (k2 + m2)) / (k2 + m2);
    }
  }
  return s;
}

double grid_variance(const TorusSpec& t) {
  const Eigen::MatrixXd s = torus_spectrum(t);
  return s.sum() / (static_cast<double>(t.grid) * t.grid);
}

Eigen::MatrixXd grid_covariance_table(const TorusSpec& t) {
  Eigen::MatrixXcd s = torus_spectrum(t).cast<std::complex<double>>();
  ifft2(s);
  return s.real();
}

TorusField sample_field(const TorusSpec& t, RandomStream stream) {
  TorusField f;
  f.spec = t;
  f.values = spectral_synthesize(torus_spectrum(t), stream);
  return f;
}

double exact_gaussian_moment(const TorusSpec& t, const std::vector<ChargePoint>& charges) {
  const Eigen::MatrixXd cov = grid_covariance_table(t);
  const int n = t.grid;
  for (size_t a = 0; a < charges.size(); ++a)
    for (size_t b = a + 1; b < charges.size(); ++b)
      if (charges[a].ix == charges[b].ix && charges[a].iy == charges[b].iy)
        throw domain_error("exact_gaussian_moment: coincident charge points");
  double log_val = 0.0;
  const double var = cov(0, 0);
  for (const auto& c : charges)
    log_val += -c.alpha * c.alpha * std::log(t.eps) - 2.0 * M_PI * c.alpha * c.alpha * var;
  for (size_t a = 0; a < charges.size(); ++a)
    for (size_t b = a + 1; b < charges.size(); ++b) {
      const int di = ((charges[a].ix - charges[b].ix) % n + n) % n;
      const int dj = ((charges[a].iy - charges[b].iy) % n + n) % n;
      log_val += -4.0 * M_PI * charges[a].alpha * charges[b].alpha * cov(di, dj);
    }
  return std::exp(log_val);
}

namespace {

std::complex<double> one_sample_product(const TorusSpec& t, const MomentRequest& req,
                                        const Eigen::MatrixXd& field) {
  const double cell2 = t.cell() * t.cell();
  std::complex<double> prod = 1.0;
  const double s4pi = std::sqrt(4.0 * M_PI);
  for (const auto& c : req.charges) {
    std::complex<double> acc = 0.0;
    for (Eigen::Index j = 0; j < field.cols(); ++j)
      for (Eigen::Index i = 0; i < field.rows(); ++i) {
        const double fv = c.f(i, j);
        if (fv == 0.0) continue;
        const double phase = s4pi * c.alpha * field(i, j);
        acc += fv * std::complex<double>(std::cos(phase), std::sin(phase));
      }
    prod *= std::pow(t.eps, -c.alpha * c.alpha) * cell2 * acc;
  }
  return prod;
}

}  // namespace

MomentEstimate estimate_moment(const TorusSpec& t, const MomentRequest& req) {
  t.validate();
  if (req.samples < 100) throw domain_error("estimate_moment: needs at least 100 samples");
  for (const auto& c : req.charges) {
    if (std::abs(c.alpha) >= 1.0) throw domain_error("estimate_moment: |alpha| must be < 1");
    if (c.f.rows() != t.grid || c.f.cols() != t.grid)
      throw domain_error("estimate_moment: test function grid mismatch");
  }

  const Eigen::MatrixXd spectrum = torus_spectrum(t);
  std::vector<std::complex<double>> vals(req.samples);

  // Samples 2k and 2k+1 come from substream k; the assignment is fixed, so
  // the estimate is bit-identical for any thread count.
  const int pairs = (req.samples + 1) / 2;
  const int nthreads = std::max(1, req.threads);
  auto worker = [&](int tid) {
    Eigen::MatrixXd fa, fb;
    for (int k = tid; k < pairs; k += nthreads) {
      synthesize_pair(spectrum, req.stream.substream(k), fa, fb);
      vals[2 * k] = one_sample_product(t, req, fa);
      if (2 * k + 1 < req.samples) vals[2 * k + 1] = one_sample_product(t, req, fb);
    }
  };
  if (nthreads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int tid = 0; tid < nthreads; ++tid) pool.emplace_back(worker, tid);
    for (auto& th : pool) th.join();
  }

  std::complex<double> mean = 0.0;
  for (const auto& v : vals) mean += v;
  mean /= static_cast<double>(req.samples);
  double ss = 0.0;
  for (const auto& v : vals) ss += std::norm(v - mean);
  const double n = static_cast<double>(req.samples);
  const double stderr_ = std::sqrt(ss / (n - 1.0) / n);
  return MomentEstimate{mean, stderr_};
}

}  // namespace sgff
