#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>

#include "ymtg/fft.hpp"
#include "ymtg/grid.hpp"
#include "ymtg/lie.hpp"

namespace ymtg {

enum class Rep { Physical, Spectral };

// Spectral coefficients are with respect to the L2-orthonormal basis
// e^{i xi.x} / L^{3/2}, so Parseval holds with no grid factors:
//   forward  f_hat = (L^{3/2} / n^3) * DFT(f)
//   inverse  f     = IDFT(f_hat) / L^{3/2}
// and ||f||_{L2}^2 = sum_k w_k |f_hat_k|^2 with w_k the half-spectrum
// multiplicity (2 except on the k3=0 and k3=n/2 planes).

class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(TorusGrid grid, int dim, Rep rep = Rep::Physical)
      : grid_(grid), dim_(dim), rep_(rep) {
    if (dim <= 0) throw input_error("ScalarField: dim must be positive");
    if (rep == Rep::Physical)
      phys_.assign(static_cast<size_t>(dim) * grid.points(), 0.0);
    else
      spec_.assign(static_cast<size_t>(dim) * grid.spec_points(), {0.0, 0.0});
  }

  const TorusGrid& grid() const { return grid_; }
  int dim() const { return dim_; }
  Rep rep() const { return rep_; }

  double* phys(int a) { return phys_.data() + static_cast<size_t>(a) * grid_.points(); }
  const double* phys(int a) const { return phys_.data() + static_cast<size_t>(a) * grid_.points(); }
  std::complex<double>* spec(int a) { return spec_.data() + static_cast<size_t>(a) * grid_.spec_points(); }
  const std::complex<double>* spec(int a) const {
    return spec_.data() + static_cast<size_t>(a) * grid_.spec_points();
  }

  double& at(int a, int ix, int iy, int iz) { return phys(a)[grid_.pidx(ix, iy, iz)]; }
  double at(int a, int ix, int iy, int iz) const { return phys(a)[grid_.pidx(ix, iy, iz)]; }

  ScalarField& operator+=(const ScalarField& o) {
    check_same(o);
    if (rep_ == Rep::Physical)
      for (size_t i = 0; i < phys_.size(); ++i) phys_[i] += o.phys_[i];
    else
      for (size_t i = 0; i < spec_.size(); ++i) spec_[i] += o.spec_[i];
    return *this;
  }
  ScalarField& operator-=(const ScalarField& o) {
    check_same(o);
    if (rep_ == Rep::Physical)
      for (size_t i = 0; i < phys_.size(); ++i) phys_[i] -= o.phys_[i];
    else
      for (size_t i = 0; i < spec_.size(); ++i) spec_[i] -= o.spec_[i];
    return *this;
  }
  ScalarField& operator*=(double s) {
    if (rep_ == Rep::Physical)
      for (auto& v : phys_) v *= s;
    else
      for (auto& v : spec_) v *= s;
    return *this;
  }
  friend ScalarField operator+(ScalarField x, const ScalarField& y) { return x += y; }
  friend ScalarField operator-(ScalarField x, const ScalarField& y) { return x -= y; }
  friend ScalarField operator*(double s, ScalarField x) { return x *= s; }

  void check_same(const ScalarField& o) const {
    if (grid_ != o.grid_ || dim_ != o.dim_) throw input_error("field mismatch: grid or algebra dim");
    if (rep_ != o.rep_) throw input_error("field mismatch: representation");
  }

 private:
  TorusGrid grid_;
  int dim_ = 0;
  Rep rep_ = Rep::Physical;
  fft::RealBuf phys_;
  fft::CplxBuf spec_;
};

namespace detail {

inline double spec_weight(const TorusGrid& g, int iz) {
  return (iz == 0 || iz == g.n / 2) ? 1.0 : 2.0;
}

/// Visit every stored half-spectrum mode: f(ix, iy, iz, flat_index).
template <class F>
inline void for_modes(const TorusGrid& g, F&& f) {
  const int n = g.n, nzh = g.nz_half();
  size_t idx = 0;
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy)
      for (int iz = 0; iz < nzh; ++iz, ++idx) f(ix, iy, iz, idx);
}

// Make the redundant entries of the self-conjugate k3 planes exactly
// Hermitian. FFTW's r2c computes them independently, leaving rounding-level
// asymmetry that would otherwise surface when a later operation cancels the
// field to roundoff. With this repair, all multiplier-type operations keep
// the symmetry bit-exact.
inline void symmetrize_hermitian_planes(const TorusGrid& g, std::complex<double>* s) {
  const int n = g.n;
  for (int iz : {0, n / 2})
    for (int ix = 0; ix < n; ++ix)
      for (int iy = 0; iy < n; ++iy) {
        const int jx = (n - ix) % n, jy = (n - iy) % n;
        if (jx < ix || (jx == ix && jy < iy)) continue;
        const size_t a = g.sidx(ix, iy, iz), b = g.sidx(jx, jy, iz);
        if (a == b) {
          s[a] = std::complex<double>(s[a].real(), 0.0);
        } else {
          const std::complex<double> v = 0.5 * (s[a] + std::conj(s[b]));
          s[a] = v;
          s[b] = std::conj(v);
        }
      }
}

}  // namespace detail

/// Forward transform. Already-spectral input is a no-op with *was_noop set.
inline ScalarField to_spectral(const ScalarField& f, bool* was_noop = nullptr) {
  if (was_noop) *was_noop = false;
  if (f.rep() == Rep::Spectral) {
    if (was_noop) *was_noop = true;
    return f;
  }
  const TorusGrid& g = f.grid();
  ScalarField out(g, f.dim(), Rep::Spectral);
  const double scale = std::pow(g.length, 1.5) / static_cast<double>(g.points());
  for (int a = 0; a < f.dim(); ++a) {
    fft::r2c_3d(g.n, f.phys(a), out.spec(a));
    std::complex<double>* s = out.spec(a);
    for (size_t i = 0; i < g.spec_points(); ++i) s[i] *= scale;
    detail::symmetrize_hermitian_planes(g, s);
  }
  return out;
}

/// Max Hermitian-symmetry violation over the self-conjugate k3 planes.
inline double hermitian_violation(const ScalarField& f) {
  if (f.rep() != Rep::Spectral) return 0.0;
  const TorusGrid& g = f.grid();
  const int n = g.n;
  double worst = 0.0;
  for (int a = 0; a < f.dim(); ++a) {
    const std::complex<double>* s = f.spec(a);
    for (int iz : {0, n / 2})
      for (int ix = 0; ix < n; ++ix)
        for (int iy = 0; iy < n; ++iy) {
          const int jx = (n - ix) % n, jy = (n - iy) % n;
          const auto d = s[g.sidx(ix, iy, iz)] - std::conj(s[g.sidx(jx, jy, iz)]);
          worst = std::max(worst, std::abs(d));
        }
  }
  return worst;
}

inline double max_spec_abs(const ScalarField& f) {
  double m = 0.0;
  for (int a = 0; a < f.dim(); ++a) {
    const std::complex<double>* s = f.spec(a);
    for (size_t i = 0; i < f.grid().spec_points(); ++i) m = std::max(m, std::abs(s[i]));
  }
  return m;
}

inline ScalarField to_physical(const ScalarField& f, bool* was_noop = nullptr) {
  if (was_noop) *was_noop = false;
  if (f.rep() == Rep::Physical) {
    if (was_noop) *was_noop = true;
    return f;
  }
  const TorusGrid& g = f.grid();
  const double viol = hermitian_violation(f);
  const double scale_ref = std::max(max_spec_abs(f), 1e-300);
  if (viol > 1e-9 * scale_ref)
    throw numerical_error("to_physical: Hermitian symmetry violated (corrupted spectrum)");
  ScalarField out(g, f.dim(), Rep::Physical);
  const double scale = 1.0 / std::pow(g.length, 1.5);
  fft::CplxBuf work(g.spec_points());
  for (int a = 0; a < f.dim(); ++a) {
    std::copy(f.spec(a), f.spec(a) + g.spec_points(), work.begin());
    fft::c2r_3d(g.n, work.data(), out.phys(a));
    double* p = out.phys(a);
    for (size_t i = 0; i < g.points(); ++i) p[i] *= scale;
  }
  return out;
}

/// d/dx_axis via the i*xi multiplier; the Nyquist plane of that axis is zeroed.
inline ScalarField partial_derivative(const ScalarField& f, int axis) {
  if (axis < 0 || axis > 2) throw input_error("partial_derivative: axis must be 0, 1 or 2");
  const bool phys_in = (f.rep() == Rep::Physical);
  ScalarField s = phys_in ? to_spectral(f) : f;
  const TorusGrid& g = f.grid();
  for (int a = 0; a < f.dim(); ++a) {
    std::complex<double>* d = s.spec(a);
    detail::for_modes(g, [&](int ix, int iy, int iz, size_t idx) {
      const int ki[3] = {g.k_of(ix), g.k_of(iy), g.k_of(iz)};
      if (std::abs(ki[axis]) == g.n / 2) {
        d[idx] = 0.0;
        return;
      }
      const double xi = (2.0 * M_PI / g.length) * ki[axis];
      d[idx] *= std::complex<double>(0.0, xi);
    });
  }
  return phys_in ? to_physical(s) : s;
}

/// Spectral division by -|xi|^2; the mean mode maps to zero.
inline ScalarField inverse_laplacian(const ScalarField& f) {
  const bool phys_in = (f.rep() == Rep::Physical);
  ScalarField s = phys_in ? to_spectral(f) : f;
  const TorusGrid& g = f.grid();
  for (int a = 0; a < f.dim(); ++a) {
    std::complex<double>* d = s.spec(a);
    detail::for_modes(g, [&](int ix, int iy, int iz, size_t idx) {
      const double x1 = g.xi_of(ix), x2 = g.xi_of(iy), x3 = g.xi_of(iz);
      const double k2 = x1 * x1 + x2 * x2 + x3 * x3;
      d[idx] = (k2 == 0.0) ? 0.0 : d[idx] / (-k2);
    });
  }
  return phys_in ? to_physical(s) : s;
}

/// H^s norm: (sum <xi>^{2s} |f_hat|^2)^{1/2} summed over algebra coefficients.
inline double sobolev_norm(const ScalarField& f, double s) {
  ScalarField sf = (f.rep() == Rep::Spectral) ? f : to_spectral(f);
  const TorusGrid& g = f.grid();
  double acc = 0.0;
  for (int a = 0; a < f.dim(); ++a) {
    const std::complex<double>* d = sf.spec(a);
    detail::for_modes(g, [&](int ix, int iy, int iz, size_t idx) {
      const double x1 = g.xi_of(ix), x2 = g.xi_of(iy), x3 = g.xi_of(iz);
      const double k2 = x1 * x1 + x2 * x2 + x3 * x3;
      const double w = detail::spec_weight(g, iz);
      acc += w * std::pow(1.0 + k2, s) * std::norm(d[idx]);
    });
  }
  return std::sqrt(acc);
}

inline double l2_norm(const ScalarField& f) {
  if (f.rep() == Rep::Physical) {
    const double h3 = std::pow(f.grid().spacing(), 3);
    double acc = 0.0;
    for (int a = 0; a < f.dim(); ++a) {
      const double* p = f.phys(a);
      for (size_t i = 0; i < f.grid().points(); ++i) acc += p[i] * p[i];
    }
    return std::sqrt(h3 * acc);
  }
  return sobolev_norm(f, 0.0);
}

/// Spatial mean of coefficient a.
inline double mean_value(const ScalarField& f, int a) {
  if (f.rep() == Rep::Physical) {
    const double* p = f.phys(a);
    double acc = 0.0;
    for (size_t i = 0; i < f.grid().points(); ++i) acc += p[i];
    return acc / static_cast<double>(f.grid().points());
  }
  return f.spec(a)[0].real() / std::pow(f.grid().length, 1.5);
}

// ---------------------------------------------------------------------------

struct VectorField {
  std::array<ScalarField, 3> comp;

  VectorField() = default;
  VectorField(TorusGrid grid, int dim, Rep rep = Rep::Physical)
      : comp{ScalarField(grid, dim, rep), ScalarField(grid, dim, rep), ScalarField(grid, dim, rep)} {}

  const TorusGrid& grid() const { return comp[0].grid(); }
  int dim() const { return comp[0].dim(); }
  Rep rep() const { return comp[0].rep(); }
  ScalarField& operator[](int i) { return comp[i]; }
  const ScalarField& operator[](int i) const { return comp[i]; }

  VectorField& operator+=(const VectorField& o) {
    for (int i = 0; i < 3; ++i) comp[i] += o.comp[i];
    return *this;
  }
  VectorField& operator-=(const VectorField& o) {
    for (int i = 0; i < 3; ++i) comp[i] -= o.comp[i];
    return *this;
  }
  VectorField& operator*=(double s) {
    for (int i = 0; i < 3; ++i) comp[i] *= s;
    return *this;
  }
  friend VectorField operator+(VectorField x, const VectorField& y) { return x += y; }
  friend VectorField operator-(VectorField x, const VectorField& y) { return x -= y; }
  friend VectorField operator*(double s, VectorField x) { return x *= s; }
};

inline VectorField to_spectral(const VectorField& f) {
  VectorField r;
  for (int i = 0; i < 3; ++i) r.comp[i] = to_spectral(f[i]);
  return r;
}
inline VectorField to_physical(const VectorField& f) {
  VectorField r;
  for (int i = 0; i < 3; ++i) r.comp[i] = to_physical(f[i]);
  return r;
}

inline double sobolev_norm(const VectorField& f, double s) {
  double acc = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double v = sobolev_norm(f[i], s);
    acc += v * v;
  }
  return std::sqrt(acc);
}

inline double l2_norm(const VectorField& f) {
  double acc = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double v = l2_norm(f[i]);
    acc += v * v;
  }
  return std::sqrt(acc);
}

// ---------------------------------------------------------------------------
// Dealiased products. Quadratic products are computed on a 3n/2 zero-padded
// grid, cubic chains on a 2n grid; retained coefficients are then exact for
// band-limited inputs. Axis Nyquist modes are dropped on the way to the fine
// grid (a folded cosine has no faithful fine-grid image).

enum class DealiasRule { Quadratic, Cubic };

class Dealiaser {
 public:
  Dealiaser(TorusGrid grid, DealiasRule rule)
      : grid_(grid), m_(rule == DealiasRule::Quadratic ? (3 * grid.n) / 2 : 2 * grid.n) {
    fine_spec_.assign(spec_points_fine(), {0.0, 0.0});
  }

  int fine_n() const { return m_; }
  size_t fine_points() const { return static_cast<size_t>(m_) * m_ * m_; }
  size_t spec_points_fine() const { return static_cast<size_t>(m_) * m_ * (m_ / 2 + 1); }

  /// Zero-pad one coefficient plane and inverse-transform to the fine grid.
  void to_fine(const std::complex<double>* spec_n, double* phys_fine) {
    to_fine_pad(spec_n);
    fft::c2r_3d(m_, fine_spec_.data(), phys_fine);
    const double scale = 1.0 / std::pow(grid_.length, 1.5);
    for (size_t i = 0; i < fine_points(); ++i) phys_fine[i] *= scale;
  }

  /// Forward-transform a fine-grid product and truncate to the coarse band.
  void to_band(const double* phys_fine, std::complex<double>* spec_n) {
    const int n = grid_.n, m = m_;
    fft::r2c_3d(m_, phys_fine, fine_spec_.data());
    const double scale = std::pow(grid_.length, 1.5) / static_cast<double>(fine_points());
    const int half = n / 2;
    std::fill(spec_n, spec_n + grid_.spec_points(), std::complex<double>(0.0, 0.0));
    for (int ix = 0; ix < n; ++ix) {
      const int kx = grid_.k_of(ix);
      if (std::abs(kx) == half) continue;
      const int jx = kx >= 0 ? kx : kx + m;
      for (int iy = 0; iy < n; ++iy) {
        const int ky = grid_.k_of(iy);
        if (std::abs(ky) == half) continue;
        const int jy = ky >= 0 ? ky : ky + m;
        const size_t dst_row = (static_cast<size_t>(ix) * n + iy) * (half + 1);
        const size_t src_row = (static_cast<size_t>(jx) * m + jy) * (m / 2 + 1);
        for (int iz = 0; iz < half; ++iz) spec_n[dst_row + iz] = scale * fine_spec_[src_row + iz];
      }
    }
    detail::symmetrize_hermitian_planes(grid_, spec_n);
  }

 private:
  void to_fine_pad(const std::complex<double>* spec_n) {
    const int n = grid_.n, m = m_;
    std::fill(fine_spec_.begin(), fine_spec_.end(), std::complex<double>(0.0, 0.0));
    const int half = n / 2;
    for (int ix = 0; ix < n; ++ix) {
      const int kx = grid_.k_of(ix);
      if (std::abs(kx) == half) continue;
      const int jx = kx >= 0 ? kx : kx + m;
      for (int iy = 0; iy < n; ++iy) {
        const int ky = grid_.k_of(iy);
        if (std::abs(ky) == half) continue;
        const int jy = ky >= 0 ? ky : ky + m;
        const size_t src_row = (static_cast<size_t>(ix) * n + iy) * (half + 1);
        const size_t dst_row = (static_cast<size_t>(jx) * m + jy) * (m / 2 + 1);
        for (int iz = 0; iz < half; ++iz) fine_spec_[dst_row + iz] = spec_n[src_row + iz];
      }
    }
  }

  TorusGrid grid_;
  int m_;
  fft::CplxBuf fine_spec_;
};

// Pointwise product per algebra coefficient, dealiased. Both inputs must
// share grid, dim and representation; output matches the input representation.
inline ScalarField dealiased_product(const ScalarField& f, const ScalarField& g,
                                     DealiasRule rule = DealiasRule::Quadratic) {
  if (f.grid() != g.grid() || f.dim() != g.dim())
    throw input_error("dealiased_product: grid or dim mismatch");
  const bool phys_in = (f.rep() == Rep::Physical);
  if (g.rep() != f.rep()) throw input_error("dealiased_product: representation mismatch");
  ScalarField fs = phys_in ? to_spectral(f) : f;
  ScalarField gs = phys_in ? to_spectral(g) : g;
  Dealiaser dl(f.grid(), rule);
  fft::RealBuf fa(dl.fine_points()), gb(dl.fine_points());
  ScalarField out(f.grid(), f.dim(), Rep::Spectral);
  for (int a = 0; a < f.dim(); ++a) {
    dl.to_fine(fs.spec(a), fa.data());
    dl.to_fine(gs.spec(a), gb.data());
    for (size_t i = 0; i < dl.fine_points(); ++i) fa[i] *= gb[i];
    dl.to_band(fa.data(), out.spec(a));
  }
  return phys_in ? to_physical(out) : out;
}

}  // namespace ymtg
