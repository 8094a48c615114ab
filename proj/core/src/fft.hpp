#pragma once

// Thin RAII layer over FFTW's double-precision complex transforms. Plans are
// created with FFTW_ESTIMATE so they do not depend on timing measurements,
// which keeps results bit-reproducible from run to run.

#include <fftw3.h>

#include <algorithm>
#include <complex>
#include <cstddef>
#include <mutex>
#include <stdexcept>

namespace evwg::detail {

inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

class FftBuffer {
 public:
  explicit FftBuffer(std::size_t n) : n_(n), data_(fftw_alloc_complex(n)) {
    if (!data_) throw std::bad_alloc();
  }
  ~FftBuffer() { fftw_free(data_); }
  FftBuffer(const FftBuffer&) = delete;
  FftBuffer& operator=(const FftBuffer&) = delete;

  std::size_t size() const { return n_; }
  fftw_complex* raw() { return data_; }
  std::complex<double>* data() { return reinterpret_cast<std::complex<double>*>(data_); }
  const std::complex<double>* data() const { return reinterpret_cast<const std::complex<double>*>(data_); }
  std::complex<double>& operator[](std::size_t i) { return data()[i]; }
  const std::complex<double>& operator[](std::size_t i) const { return data()[i]; }

 private:
  std::size_t n_;
  fftw_complex* data_;
};

class FftPlan {
 public:
  FftPlan() = default;
  // In-place 2D transform of an ny x nx array (x fastest) held in buf.
  FftPlan(int ny, int nx, FftBuffer& buf, int sign) {
    std::lock_guard lock(fftw_planner_mutex());
    plan_ = fftw_plan_dft_2d(ny, nx, buf.raw(), buf.raw(), sign, FFTW_ESTIMATE);
    if (!plan_) throw std::runtime_error("fftw: could not create 2D plan");
  }
  // In-place batch of `howmany` contiguous 1D transforms of length n.
  FftPlan(int n, int howmany, FftBuffer& buf, int sign, bool /*batch*/) {
    std::lock_guard lock(fftw_planner_mutex());
    plan_ = fftw_plan_many_dft(1, &n, howmany, buf.raw(), nullptr, 1, n, buf.raw(), nullptr, 1, n, sign,
                               FFTW_ESTIMATE);
    if (!plan_) throw std::runtime_error("fftw: could not create 1D batch plan");
  }
  ~FftPlan() { reset(); }
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;
  FftPlan(FftPlan&& o) noexcept : plan_(o.plan_) { o.plan_ = nullptr; }
  FftPlan& operator=(FftPlan&& o) noexcept {
    if (this != &o) {
      reset();
      plan_ = o.plan_;
      o.plan_ = nullptr;
    }
    return *this;
  }

  void execute() const { fftw_execute(plan_); }

 private:
  void reset() {
    if (plan_) {
      std::lock_guard lock(fftw_planner_mutex());
      fftw_destroy_plan(plan_);
      plan_ = nullptr;
    }
  }
  fftw_plan plan_ = nullptr;
};

/// Signed frequency index of DFT bin k on an n-point grid; the Nyquist bin
/// maps to -n/2.
inline int signed_frequency(int k, int n) { return k < n / 2 ? k : k - n; }


/// Product without the NaN/infinity recovery of std::complex operator*,
/// which is far slower and never needed for finite phase factors.
inline std::complex<double> cmul(std::complex<double> a, std::complex<double> b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

/// Blocked in-place transpose of an n x n array.
inline void transpose_square(std::complex<double>* a, int n) {
  constexpr int block = 8;
  for (int ib = 0; ib < n; ib += block) {
    for (int jb = ib; jb < n; jb += block) {
      const int imax = std::min(ib + block, n);
      const int jmax = std::min(jb + block, n);
      for (int i = ib; i < imax; ++i) {
        for (int j = (ib == jb ? i + 1 : jb); j < jmax; ++j) {
          std::swap(a[static_cast<std::size_t>(i) * n + j], a[static_cast<std::size_t>(j) * n + i]);
        }
      }
    }
  }
}

/// Square 2D transform built from contiguous batched row transforms and a
/// transpose; strided column transforms are several times slower.
/// The *_transposed variants leave (or expect) the spectrum with the roles of
/// the axes swapped, saving one transpose per direction.
class Fft2D {
 public:
  Fft2D(int n, FftBuffer& buf)
      : n_(n), buf_(&buf), fwd_(n, n, buf, FFTW_FORWARD, true), bwd_(n, n, buf, FFTW_BACKWARD, true) {}

  // Spectrum index [kx * n + ky].
  void forward_transposed() const {
    fwd_.execute();
    transpose_square(buf_->data(), n_);
    fwd_.execute();
  }
  void backward_from_transposed() const {
    bwd_.execute();
    transpose_square(buf_->data(), n_);
    bwd_.execute();
  }
  // Spectrum index [ky * n + kx].
  void forward() const {
    forward_transposed();
    transpose_square(buf_->data(), n_);
  }
  void backward() const {
    transpose_square(buf_->data(), n_);
    backward_from_transposed();
  }

 private:
  int n_;
  FftBuffer* buf_;
  FftPlan fwd_;
  FftPlan bwd_;
};

}  // namespace evwg::detail
