#pragma once

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ymtg/errors.hpp"

namespace ymtg {

/// Element of the algebra in a fixed basis {e_a}: a plain coefficient vector.
struct AlgebraElement {
  std::vector<double> coeffs;

  AlgebraElement() = default;
  explicit AlgebraElement(int dim) : coeffs(dim, 0.0) {}
  AlgebraElement(std::initializer_list<double> c) : coeffs(c) {}

  int dim() const { return static_cast<int>(coeffs.size()); }
  double& operator[](int a) { return coeffs[a]; }
  double operator[](int a) const { return coeffs[a]; }

  static AlgebraElement basis(int dim, int a) {
    AlgebraElement e(dim);
    e[a] = 1.0;
    return e;
  }
};

inline AlgebraElement operator+(const AlgebraElement& x, const AlgebraElement& y) {
  AlgebraElement r = x;
  for (int a = 0; a < r.dim(); ++a) r[a] += y[a];
  return r;
}

inline AlgebraElement operator-(const AlgebraElement& x, const AlgebraElement& y) {
  AlgebraElement r = x;
  for (int a = 0; a < r.dim(); ++a) r[a] -= y[a];
  return r;
}

inline AlgebraElement operator*(double s, const AlgebraElement& x) {
  AlgebraElement r = x;
  for (auto& c : r.coeffs) c *= s;
  return r;
}

inline double max_abs(const AlgebraElement& x) {
  double m = 0.0;
  for (double c : x.coeffs) m = std::max(m, std::abs(c));
  return m;
}

// Structure constants c(a,b,k) with [e_a, e_b] = sum_k c(a,b,k) e_k.
// Construction accepts arbitrary tensors; antisymmetry and the Jacobi
// identity are checked explicitly so that deliberately broken tensors can be
// probed by diagnostics.
class StructureTensor {
 public:
  StructureTensor() : dim_(0) {}
  explicit StructureTensor(int dim) : dim_(dim), c_(static_cast<size_t>(dim) * dim * dim, 0.0) {
    if (dim <= 0) throw input_error("StructureTensor: dim must be positive");
  }

  int dim() const { return dim_; }

  double c(int a, int b, int k) const { return c_[idx(a, b, k)]; }
  void set(int a, int b, int k, double v) {
    c_[idx(a, b, k)] = v;
    nonzero_dirty_ = true;
  }

  /// su(2) in the basis with [e_a, e_b] = eps_{abk} e_k.
  static StructureTensor su2() {
    StructureTensor s(3);
    s.set(0, 1, 2, 1.0);
    s.set(1, 0, 2, -1.0);
    s.set(1, 2, 0, 1.0);
    s.set(2, 1, 0, -1.0);
    s.set(2, 0, 1, 1.0);
    s.set(0, 2, 1, -1.0);
    return s;
  }

  /// Commuting algebra of the given dimension: all constants zero.
  static StructureTensor abelian(int dim) { return StructureTensor(dim); }

  bool is_zero() const {
    for (double v : c_)
      if (v != 0.0) return false;
    return true;
  }

  double antisymmetry_error() const {
    double m = 0.0;
    for (int a = 0; a < dim_; ++a)
      for (int b = 0; b < dim_; ++b)
        for (int k = 0; k < dim_; ++k) m = std::max(m, std::abs(c(a, b, k) + c(b, a, k)));
    return m;
  }

  struct Entry {
    int a, b, k;
    double v;
  };

  /// Nonzero entries, cached; product kernels iterate over this list.
  const std::vector<Entry>& nonzeros() const {
    if (nonzero_dirty_) {
      nonzeros_.clear();
      for (int a = 0; a < dim_; ++a)
        for (int b = 0; b < dim_; ++b)
          for (int k = 0; k < dim_; ++k)
            if (c(a, b, k) != 0.0) nonzeros_.push_back({a, b, k, c(a, b, k)});
      nonzero_dirty_ = false;
    }
    return nonzeros_;
  }

  // Text format: first line dim, then "a b k value" per nonzero entry,
  // basis indices 1-based. Lines starting with '#' are comments.
  static StructureTensor from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open structure tensor file: " + path);
    std::string line;
    int dim = 0;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::istringstream is(line);
      if (!(is >> dim)) throw io_error("bad header line in " + path);
      break;
    }
    if (dim <= 0) throw io_error("structure tensor file has no valid dimension: " + path);
    StructureTensor s(dim);
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::istringstream is(line);
      int a, b, k;
      double v;
      if (!(is >> a >> b >> k >> v)) throw io_error("bad entry line in " + path + ": " + line);
      if (a < 1 || a > dim || b < 1 || b > dim || k < 1 || k > dim)
        throw io_error("index out of range in " + path + ": " + line);
      s.set(a - 1, b - 1, k - 1, v);
    }
    return s;
  }

 private:
  size_t idx(int a, int b, int k) const {
    return (static_cast<size_t>(a) * dim_ + b) * dim_ + k;
  }

  int dim_;
  std::vector<double> c_;
  mutable std::vector<Entry> nonzeros_;
  mutable bool nonzero_dirty_ = true;
};

inline AlgebraElement bracket(const AlgebraElement& x, const AlgebraElement& y,
                              const StructureTensor& s) {
  if (x.dim() != s.dim() || y.dim() != s.dim())
    throw input_error("bracket: element dimension does not match algebra");
  AlgebraElement r(s.dim());
  for (const auto& e : s.nonzeros()) r[e.k] += x[e.a] * y[e.b] * e.v;
  return r;
}

/// Max-norm residual of the Jacobi identity over all index quadruples.
inline double jacobi_residual(const StructureTensor& s) {
  const int d = s.dim();
  double m = 0.0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int e = 0; e < d; ++e)
        for (int g = 0; g < d; ++g) {
          double r = 0.0;
          for (int k = 0; k < d; ++k)
            r += s.c(a, b, k) * s.c(k, e, g) + s.c(b, e, k) * s.c(k, a, g) +
                 s.c(e, a, k) * s.c(k, b, g);
          m = std::max(m, std::abs(r));
        }
  return m;
}

}  // namespace ymtg
