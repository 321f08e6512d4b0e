#pragma once

#include <cstdint>
#include <cmath>

namespace sgff {

// Identifies a reproducible random stream.  Equal (master_seed, stream_id)
// pairs reproduce identical draw sequences on any platform; distinct
// stream_ids give statistically independent streams, so samples can be
// distributed over threads with a fixed stream-to-sample assignment.
struct RandomStream {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;

  RandomStream substream(std::uint64_t k) const {
    return RandomStream{master_seed, stream_id + k};
  }
};

namespace detail {

// Philox4x32-10 counter-based generator (Salmon et al.).
struct Philox4x32 {
  std::uint32_t key[2];
  std::uint32_t ctr[4];

  static void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
  }

  void block(std::uint32_t out[4]) const {
    constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
    constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
    std::uint32_t k0 = key[0], k1 = key[1];
    std::uint32_t c0 = ctr[0], c1 = ctr[1], c2 = ctr[2], c3 = ctr[3];
    for (int round = 0; round < 10; ++round) {
      std::uint32_t hi0, lo0, hi1, lo1;
      mulhilo(M0, c0, hi0, lo0);
      mulhilo(M1, c2, hi1, lo1);
      std::uint32_t n0 = hi1 ^ c1 ^ k0;
      std::uint32_t n1 = lo1;
      std::uint32_t n2 = hi0 ^ c3 ^ k1;
      std::uint32_t n3 = lo0;
      c0 = n0; c1 = n1; c2 = n2; c3 = n3;
      k0 += W0; k1 += W1;
    }
    out[0] = c0; out[1] = c1; out[2] = c2; out[3] = c3;
  }
};

// Wichura's AS241 (PPND16) inverse normal CDF, good to ~1e-15.
inline double inverse_normal_cdf(double p) {
  const double q = p - 0.5;
  double r;
  if (std::fabs(q) <= 0.425) {
    r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                 6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
               1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
             1.3314166789178437745e2) * r + 3.3871328727963666080e0) /
           (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                 3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
               5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
             4.2313330701600911252e1) * r + 1.0);
  }
  r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double v;
  if (r <= 5.0) {
    r -= 1.6;
    v = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
              2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
            3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
          4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
        (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
              1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
            6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
          2.05319162663775882187e0) * r + 1.0);
  } else {
    r -= 5.0;
    v = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
              1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
            2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
          5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
        (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
              1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
            1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
          5.99832206555887937690e-1) * r + 1.0);
  }
  return q < 0.0 ? -v : v;
}

}  // namespace detail

// Counter-based stream of uniform and normal variates.  A value type:
// copying it forks the draw position, so callers that need determinism
// across threads index draws by counter instead of sharing state.
class CounterRng {
 public:
  explicit CounterRng(RandomStream s) : stream_(s), counter_(0), buffered_(0) {}

  // Uniform on (0,1), endpoints excluded.
  double uniform() {
    if (buffered_ == 0) refill();
    std::uint32_t hi = buf_[--buffered_];
    std::uint32_t lo = buf_[--buffered_];
    std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
    // 53-bit mantissa, shifted into (0,1).
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal() { return detail::inverse_normal_cdf(uniform()); }

 private:
  void refill() {
    detail::Philox4x32 px;
    px.key[0] = static_cast<std::uint32_t>(stream_.master_seed);
    px.key[1] = static_cast<std::uint32_t>(stream_.master_seed >> 32);
    px.ctr[0] = static_cast<std::uint32_t>(counter_);
    px.ctr[1] = static_cast<std::uint32_t>(counter_ >> 32);
    px.ctr[2] = static_cast<std::uint32_t>(stream_.stream_id);
    px.ctr[3] = static_cast<std::uint32_t>(stream_.stream_id >> 32);
    px.block(buf_);
    ++counter_;
    buffered_ = 4;
  }

  RandomStream stream_;
  std::uint64_t counter_;
  int buffered_;
  std::uint32_t buf_[4];
};

}  // namespace sgff
