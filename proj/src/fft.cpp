#include "vsl/fft.hpp"

#include <cstring>
#include <mutex>
#include <new>
#include <stdexcept>

#include <fftw3.h>

namespace vsl {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

RealFft2d::RealFft2d(int n) : n_(n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("RealFft2d: n must be even");
  const std::size_t nr = static_cast<std::size_t>(n) * n;
  real_ = fftw_alloc_real(nr);
  auto* spec = fftw_alloc_complex(spectral_size());
  spec_ = spec;
  if (real_ == nullptr || spec == nullptr) {
    fftw_free(real_);
    fftw_free(spec);
    throw std::bad_alloc();
  }
  std::lock_guard lock(planner_mutex());
  plan_fwd_ = fftw_plan_dft_r2c_2d(n, n, real_, spec, FFTW_ESTIMATE);
  plan_inv_ = fftw_plan_dft_c2r_2d(n, n, spec, real_, FFTW_ESTIMATE);
  if (plan_fwd_ == nullptr || plan_inv_ == nullptr) throw std::runtime_error("RealFft2d: FFTW planning failed");
}

RealFft2d::~RealFft2d() {
  {
    std::lock_guard lock(planner_mutex());
    if (plan_fwd_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    if (plan_inv_ != nullptr) fftw_destroy_plan(static_cast<fftw_plan>(plan_inv_));
  }
  fftw_free(real_);
  fftw_free(static_cast<fftw_complex*>(spec_));
}

void RealFft2d::forward(std::span<const double> in, std::span<Complex> out) {
  if (in.size() != static_cast<std::size_t>(n_) * n_ || out.size() != spectral_size()) {
    throw std::invalid_argument("RealFft2d::forward: size mismatch");
  }
  std::memcpy(real_, in.data(), in.size() * sizeof(double));
  fftw_execute(static_cast<fftw_plan>(plan_fwd_));
  std::memcpy(static_cast<void*>(out.data()), spec_, out.size() * sizeof(Complex));
}

void RealFft2d::inverse(std::span<const Complex> in, std::span<double> out) {
  if (out.size() != static_cast<std::size_t>(n_) * n_ || in.size() != spectral_size()) {
    throw std::invalid_argument("RealFft2d::inverse: size mismatch");
  }
  std::memcpy(spec_, static_cast<const void*>(in.data()), in.size() * sizeof(Complex));
  fftw_execute(static_cast<fftw_plan>(plan_inv_));
  const double scale = 1.0 / (static_cast<double>(n_) * n_);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = real_[k] * scale;
}

}  // namespace vsl
