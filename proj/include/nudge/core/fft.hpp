#pragma once

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <mutex>
#include <span>
#include <utility>

#include "nudge/core/errors.hpp"

namespace nudge {

namespace detail {
// FFTW's planner is not reentrant; execution on distinct plans is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace detail

/// Real-to-complex transform pair (1D or 2D) owning aligned FFTW buffers.
/// Spectra use the half-spectrum layout along the last (contiguous) axis.
/// Plans use FFTW_ESTIMATE so results do not depend on planner timing.
class RealFft {
 public:
  explicit RealFft(std::size_t n) : n0_(1), n1_(n) { init(1); }
  RealFft(std::size_t nx, std::size_t ny) : n0_(nx), n1_(ny) { init(2); }

  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;
  RealFft(RealFft&& o) noexcept { swap(o); }
  RealFft& operator=(RealFft&& o) noexcept {
    if (this != &o) {
      release();
      swap(o);
    }
    return *this;
  }
  ~RealFft() { release(); }

  std::size_t real_size() const noexcept { return n0_ * n1_; }
  std::size_t spectrum_size() const noexcept { return n0_ * (n1_ / 2 + 1); }

  std::span<double> real() noexcept { return {real_, real_size()}; }
  std::span<std::complex<double>> spectrum() noexcept {
    return {reinterpret_cast<std::complex<double>*>(spec_), spectrum_size()};
  }

  /// real() -> spectrum(); unnormalized.
  void execute_forward() noexcept { fftw_execute(fwd_); }
  /// spectrum() -> real(), scaled by 1/N so that inverse(forward(f)) == f.
  /// The spectrum buffer is clobbered.
  void execute_inverse() noexcept {
    fftw_execute(bwd_);
    const double s = 1.0 / static_cast<double>(real_size());
    for (std::size_t i = 0; i < real_size(); ++i) real_[i] *= s;
  }

  void forward(std::span<const double> in, std::span<std::complex<double>> out) {
    std::copy(in.begin(), in.end(), real_);
    execute_forward();
    auto s = spectrum();
    std::copy(s.begin(), s.end(), out.begin());
  }
  void inverse(std::span<const std::complex<double>> in, std::span<double> out) {
    auto s = spectrum();
    std::copy(in.begin(), in.end(), s.begin());
    execute_inverse();
    std::copy(real_, real_ + real_size(), out.begin());
  }

 private:
  void init(int rank) {
    real_ = fftw_alloc_real(real_size());
    spec_ = fftw_alloc_complex(spectrum_size());
    if (!real_ || !spec_) throw Error("RealFft: allocation failed");
    std::lock_guard lock(detail::fftw_planner_mutex());
    if (rank == 1) {
      const int n = static_cast<int>(n1_);
      fwd_ = fftw_plan_dft_r2c_1d(n, real_, spec_, FFTW_ESTIMATE);
      bwd_ = fftw_plan_dft_c2r_1d(n, spec_, real_, FFTW_ESTIMATE);
    } else {
      const int a = static_cast<int>(n0_), b = static_cast<int>(n1_);
      fwd_ = fftw_plan_dft_r2c_2d(a, b, real_, spec_, FFTW_ESTIMATE);
      bwd_ = fftw_plan_dft_c2r_2d(a, b, spec_, real_, FFTW_ESTIMATE);
    }
    if (!fwd_ || !bwd_) throw Error("RealFft: planning failed");
  }

  void release() noexcept {
    if (fwd_ || bwd_) {
      std::lock_guard lock(detail::fftw_planner_mutex());
      if (fwd_) fftw_destroy_plan(fwd_);
      if (bwd_) fftw_destroy_plan(bwd_);
    }
    if (real_) fftw_free(real_);
    if (spec_) fftw_free(spec_);
    fwd_ = bwd_ = nullptr;
    real_ = nullptr;
    spec_ = nullptr;
  }

  void swap(RealFft& o) noexcept {
    std::swap(n0_, o.n0_);
    std::swap(n1_, o.n1_);
    std::swap(real_, o.real_);
    std::swap(spec_, o.spec_);
    std::swap(fwd_, o.fwd_);
    std::swap(bwd_, o.bwd_);
  }

  std::size_t n0_ = 0;
  std::size_t n1_ = 0;
  double* real_ = nullptr;
  fftw_complex* spec_ = nullptr;
  fftw_plan fwd_ = nullptr;
  fftw_plan bwd_ = nullptr;
};

}  // namespace nudge
