#pragma once

#include <fftw3.h>

#include <complex>
#include <cstdlib>
#include <map>
#include <mutex>
#include <vector>

#include "ymtg/errors.hpp"

namespace ymtg {

// FFTW-backed transforms with a process-wide plan cache. Plans are created
// with FFTW_MEASURE on scratch buffers and executed through the new-array
// interface; all field buffers come from fftw_malloc so alignment matches.
namespace fft {

template <class T>
struct FftwAllocator {
  using value_type = T;
  FftwAllocator() = default;
  template <class U>
  FftwAllocator(const FftwAllocator<U>&) {}
  T* allocate(size_t n) {
    void* p = fftw_malloc(n * sizeof(T));
    if (!p) throw std::bad_alloc();
    return static_cast<T*>(p);
  }
  void deallocate(T* p, size_t) { fftw_free(p); }
  template <class U>
  bool operator==(const FftwAllocator<U>&) const { return true; }
};

using RealBuf = std::vector<double, FftwAllocator<double>>;
using CplxBuf = std::vector<std::complex<double>, FftwAllocator<std::complex<double>>>;

namespace detail {

struct PlanSet {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

inline unsigned plan_flags() {
  static unsigned flags = [] {
    const char* e = std::getenv("YMTG_FFTW_ESTIMATE");
    return (e && e[0] == '1') ? FFTW_ESTIMATE : FFTW_MEASURE;
  }();
  return flags;
}

// Key: dims (up to 4, zero padded). Real-to-complex halves the last axis.
struct Cache {
  std::mutex mu;
  std::map<std::array<int, 4>, PlanSet> plans;

  PlanSet& get(const std::array<int, 4>& dims) {
    std::lock_guard<std::mutex> lock(mu);
    auto it = plans.find(dims);
    if (it != plans.end()) return it->second;

    int rank = 0;
    int d[4];
    size_t nreal = 1, ncplx = 1;
    for (int i = 0; i < 4; ++i)
      if (dims[i] > 0) {
        d[rank++] = dims[i];
      }
    for (int i = 0; i < rank; ++i) {
      nreal *= d[i];
      ncplx *= (i == rank - 1) ? (d[i] / 2 + 1) : d[i];
    }
    RealBuf scratch_r(nreal);
    CplxBuf scratch_c(ncplx);
    PlanSet ps;
    ps.r2c = fftw_plan_dft_r2c(rank, d, scratch_r.data(),
                               reinterpret_cast<fftw_complex*>(scratch_c.data()), plan_flags());
    ps.c2r = fftw_plan_dft_c2r(rank, d, reinterpret_cast<fftw_complex*>(scratch_c.data()),
                               scratch_r.data(), plan_flags());
    if (!ps.r2c || !ps.c2r) throw numerical_error("fftw plan creation failed");
    return plans.emplace(dims, ps).first->second;
  }
};

inline Cache& cache() {
  static Cache c;
  return c;
}

}  // namespace detail

/// Unnormalized real-to-half-complex transform (last listed axis halved).
inline void r2c(const std::array<int, 4>& dims, const double* in, std::complex<double>* out) {
  auto& ps = detail::cache().get(dims);
  fftw_execute_dft_r2c(ps.r2c, const_cast<double*>(in), reinterpret_cast<fftw_complex*>(out));
}

/// Unnormalized half-complex-to-real transform. Destroys the input buffer.
inline void c2r(const std::array<int, 4>& dims, std::complex<double>* in, double* out) {
  auto& ps = detail::cache().get(dims);
  fftw_execute_dft_c2r(ps.c2r, reinterpret_cast<fftw_complex*>(in), out);
}

inline void r2c_3d(int n, const double* in, std::complex<double>* out) {
  r2c({n, n, n, 0}, in, out);
}
inline void c2r_3d(int n, std::complex<double>* in, double* out) {
  c2r({n, n, n, 0}, in, out);
}

namespace detail {

struct C2cCache {
  std::mutex mu;
  std::map<std::pair<int, int>, fftw_plan> plans;  // (n, sign)

  fftw_plan get(int n, int sign) {
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(n, sign);
    auto it = plans.find(key);
    if (it != plans.end()) return it->second;
    CplxBuf scratch(static_cast<size_t>(n) * n * n);
    fftw_plan p = fftw_plan_dft_3d(n, n, n, reinterpret_cast<fftw_complex*>(scratch.data()),
                                   reinterpret_cast<fftw_complex*>(scratch.data()), sign,
                                   plan_flags());
    if (!p) throw numerical_error("fftw c2c plan creation failed");
    return plans.emplace(key, p).first->second;
  }
};

inline C2cCache& c2c_cache() {
  static C2cCache c;
  return c;
}

}  // namespace detail

/// In-place unnormalized complex transform; sign = FFTW_FORWARD or FFTW_BACKWARD.
inline void c2c_3d(int n, std::complex<double>* buf, int sign) {
  fftw_plan p = detail::c2c_cache().get(n, sign);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(buf), reinterpret_cast<fftw_complex*>(buf));
}

}  // namespace fft
}  // namespace ymtg
