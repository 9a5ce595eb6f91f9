#pragma once

#include <array>
#include <cmath>
#include <cstddef>

#include "ymtg/errors.hpp"

namespace ymtg {

// Uniform periodic grid on [0,L)^3. Wavenumbers are xi = (2*pi/L)*k with
// integer k in {-n/2+1,...,n/2}; real fields are stored half-spectrum
// (last axis k3 in [0, n/2]).
struct TorusGrid {
  int n = 0;
  double length = 2.0 * M_PI;

  TorusGrid() = default;
  TorusGrid(int n_, double length_ = 2.0 * M_PI) : n(n_), length(length_) {
    if (n < 8 || n % 2 != 0) throw input_error("TorusGrid: n must be even and >= 8");
    if (!(length > 0.0)) throw input_error("TorusGrid: period must be positive");
  }

  bool operator==(const TorusGrid& o) const { return n == o.n && length == o.length; }
  bool operator!=(const TorusGrid& o) const { return !(*this == o); }

  double spacing() const { return length / n; }
  size_t points() const { return static_cast<size_t>(n) * n * n; }
  int nz_half() const { return n / 2 + 1; }
  size_t spec_points() const { return static_cast<size_t>(n) * n * nz_half(); }

  /// Signed integer frequency of storage index i.
  int k_of(int i) const { return i <= n / 2 ? i : i - n; }

  /// Physical wavenumber component.
  double xi_of(int i) const { return (2.0 * M_PI / length) * k_of(i); }

  size_t pidx(int ix, int iy, int iz) const {
    return (static_cast<size_t>(ix) * n + iy) * n + iz;
  }
  size_t sidx(int ix, int iy, int iz) const {
    return (static_cast<size_t>(ix) * n + iy) * nz_half() + iz;
  }

  std::array<double, 3> point(int ix, int iy, int iz) const {
    const double h = spacing();
    return {h * ix, h * iy, h * iz};
  }
};

}  // namespace ymtg
