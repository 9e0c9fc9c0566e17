#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace mslab {

// 64-bit LCG (Knuth MMIX constants). Kept explicit so that seeded vectors are
// bit-reproducible across platforms and standard library implementations.
class Lcg64 {
 public:
  explicit Lcg64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
    return state_;
  }

  /// Uniform in [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform in [-1, 1).
  double symmetric() { return 2.0 * uniform() - 1.0; }

  std::complex<double> complex_symmetric() {
    const double re = symmetric();
    const double im = symmetric();
    return {re, im};
  }

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

/// Unit vector with entries drawn as consecutive complex_symmetric() values.
inline Eigen::VectorXcd random_unit_vector(Lcg64& rng, Eigen::Index n) {
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.complex_symmetric();
  const double nrm = v.norm();
  if (nrm > 0.0) v /= nrm;
  return v;
}

}  // namespace mslab
