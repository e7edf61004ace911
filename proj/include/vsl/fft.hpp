#pragma once

// Thin RAII wrapper over FFTW real-to-complex transforms of square arrays.
// Plans use FFTW_ESTIMATE so results do not depend on timing measurements;
// plan creation is serialized because the FFTW planner is not thread-safe.

#include <complex>
#include <span>
#include <vector>

namespace vsl {

using Complex = std::complex<double>;

class RealFft2d {
 public:
  /// Transforms of an n x n real array, row-major with y as the outer index.
  explicit RealFft2d(int n);
  ~RealFft2d();
  RealFft2d(const RealFft2d&) = delete;
  RealFft2d& operator=(const RealFft2d&) = delete;

  int n() const { return n_; }
  /// Complex coefficients per transform: n * (n/2 + 1), indexed [ky * (n/2+1) + kx].
  std::size_t spectral_size() const { return static_cast<std::size_t>(n_) * (n_ / 2 + 1); }

  /// Unnormalized forward transform.
  void forward(std::span<const double> in, std::span<Complex> out);
  /// Inverse transform including the 1/n² normalization.
  void inverse(std::span<const Complex> in, std::span<double> out);

 private:
  int n_;
  double* real_ = nullptr;
  void* spec_ = nullptr;  // fftw_complex*
  void* plan_fwd_ = nullptr;
  void* plan_inv_ = nullptr;
};

/// Signed integer wavenumber of FFT index k on an axis of length n.
inline int signed_mode(int k, int n) { return k <= n / 2 ? k : k - n; }

}  // namespace vsl
