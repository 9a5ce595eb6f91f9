#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "ymtg/errors.hpp"

namespace ymtg {

using cplx = std::complex<double>;

// Dense complex matrix for group representations. Sizes are tiny (2x2 for
// su(2)); nothing here is performance critical beyond avoiding allocations
// in the innermost pointwise loops, which reuse preallocated instances.
class CMatrix {
 public:
  CMatrix() : n_(0) {}
  explicit CMatrix(int n) : n_(n), a_(static_cast<size_t>(n) * n, cplx(0, 0)) {}

  static CMatrix identity(int n) {
    CMatrix m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int size() const { return n_; }
  cplx& operator()(int i, int j) { return a_[static_cast<size_t>(i) * n_ + j]; }
  cplx operator()(int i, int j) const { return a_[static_cast<size_t>(i) * n_ + j]; }
  cplx* data() { return a_.data(); }
  const cplx* data() const { return a_.data(); }

  CMatrix& operator+=(const CMatrix& o) {
    for (size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
  }
  CMatrix& operator-=(const CMatrix& o) {
    for (size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
  }
  CMatrix& operator*=(cplx s) {
    for (auto& v : a_) v *= s;
    return *this;
  }

  friend CMatrix operator+(CMatrix x, const CMatrix& y) { return x += y; }
  friend CMatrix operator-(CMatrix x, const CMatrix& y) { return x -= y; }
  friend CMatrix operator*(cplx s, CMatrix x) { return x *= s; }

  friend CMatrix operator*(const CMatrix& x, const CMatrix& y) {
    CMatrix r(x.n_);
    mul(x, y, r);
    return r;
  }

  /// r = x*y without allocating.
  static void mul(const CMatrix& x, const CMatrix& y, CMatrix& r) {
    const int n = x.n_;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        cplx s = 0.0;
        for (int k = 0; k < n; ++k) s += x(i, k) * y(k, j);
        r(i, j) = s;
      }
  }

  CMatrix dagger() const {
    CMatrix r(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) r(i, j) = std::conj((*this)(j, i));
    return r;
  }

  cplx trace() const {
    cplx t = 0.0;
    for (int i = 0; i < n_; ++i) t += (*this)(i, i);
    return t;
  }

  double frobenius() const {
    double s = 0.0;
    for (const auto& v : a_) s += std::norm(v);
    return std::sqrt(s);
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& v : a_) m = std::max(m, std::abs(v));
    return m;
  }

  /// Gauss-Jordan inverse with partial pivoting.
  CMatrix inverse() const {
    const int n = n_;
    CMatrix w = *this;
    CMatrix inv = identity(n);
    for (int col = 0; col < n; ++col) {
      int piv = col;
      double best = std::abs(w(col, col));
      for (int r = col + 1; r < n; ++r)
        if (std::abs(w(r, col)) > best) {
          best = std::abs(w(r, col));
          piv = r;
        }
      if (best < 1e-300) throw numerical_error("matrix inverse: singular pivot");
      if (piv != col)
        for (int j = 0; j < n; ++j) {
          std::swap(w(piv, j), w(col, j));
          std::swap(inv(piv, j), inv(col, j));
        }
      const cplx d = 1.0 / w(col, col);
      for (int j = 0; j < n; ++j) {
        w(col, j) *= d;
        inv(col, j) *= d;
      }
      for (int r = 0; r < n; ++r) {
        if (r == col) continue;
        const cplx f = w(r, col);
        if (f == 0.0) continue;
        for (int j = 0; j < n; ++j) {
          w(r, j) -= f * w(col, j);
          inv(r, j) -= f * inv(col, j);
        }
      }
    }
    return inv;
  }

  cplx det2() const { return (*this)(0, 0) * (*this)(1, 1) - (*this)(0, 1) * (*this)(1, 0); }

 private:
  int n_;
  std::vector<cplx> a_;
};

/// Matrix exponential by scaling-and-squaring with a truncated Taylor series.
inline CMatrix matrix_exp(const CMatrix& v) {
  const int n = v.size();
  double scale = v.max_abs();
  int squarings = 0;
  while (scale > 0.25) {
    scale *= 0.5;
    ++squarings;
  }
  CMatrix x = v;
  x *= std::pow(0.5, squarings);
  CMatrix r = CMatrix::identity(n);
  CMatrix term = CMatrix::identity(n);
  CMatrix tmp(n);
  for (int k = 1; k <= 30; ++k) {
    CMatrix::mul(term, x, tmp);
    tmp *= cplx(1.0 / k, 0.0);
    term = tmp;
    r += term;
    if (term.max_abs() < 1e-17) break;
  }
  for (int q = 0; q < squarings; ++q) {
    CMatrix::mul(r, r, tmp);
    r = tmp;
  }
  return r;
}

}  // namespace ymtg
