#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ymtg/lie.hpp"
#include "ymtg/small_matrix.hpp"

namespace ymtg {

/// Group element in a fixed faithful matrix representation.
struct GroupElement {
  CMatrix matrix;

  GroupElement() = default;
  explicit GroupElement(CMatrix m) : matrix(std::move(m)) {}
  int size() const { return matrix.size(); }
};

// A faithful representation of the algebra: basis matrices B_a together with
// the (real) Gram matrix of the Frobenius pairing, inverted once so that
// matrix-to-coefficient pullbacks are a small solve.
class Representation {
 public:
  Representation(std::string id, std::vector<CMatrix> basis) : id_(std::move(id)), basis_(std::move(basis)) {
    dim_ = static_cast<int>(basis_.size());
    msize_ = basis_.empty() ? 0 : basis_[0].size();
    build_gram();
  }

  const std::string& id() const { return id_; }
  int algebra_dim() const { return dim_; }
  int matrix_size() const { return msize_; }
  const CMatrix& basis(int a) const { return basis_[a]; }

  /// rep(X) = sum_a X_a B_a.
  CMatrix embed(const AlgebraElement& x) const {
    CMatrix m(msize_);
    embed_into(x.coeffs.data(), m);
    return m;
  }

  void embed_into(const double* coeffs, CMatrix& out) const {
    const int mm = msize_ * msize_;
    cplx* o = out.data();
    for (int i = 0; i < mm; ++i) o[i] = 0.0;
    for (int a = 0; a < dim_; ++a) {
      const cplx* b = basis_[a].data();
      const double c = coeffs[a];
      if (c == 0.0) continue;
      for (int i = 0; i < mm; ++i) o[i] += c * b[i];
    }
  }

  // Least-squares pullback of a matrix onto the algebra span. Returns the
  // Frobenius norm of the part of m that lies outside the span, which is the
  // representation-drift measure used by the gauge machinery.
  double pullback_into(const CMatrix& m, double* coeffs_out) const {
    std::vector<double> rhs(dim_);
    for (int a = 0; a < dim_; ++a) {
      cplx s = 0.0;
      const cplx* b = basis_[a].data();
      const cplx* q = m.data();
      const int mm = msize_ * msize_;
      for (int i = 0; i < mm; ++i) s += std::conj(b[i]) * q[i];
      rhs[a] = s.real();
    }
    for (int a = 0; a < dim_; ++a) {
      double v = 0.0;
      for (int b = 0; b < dim_; ++b) v += gram_inv_[static_cast<size_t>(a) * dim_ + b] * rhs[b];
      coeffs_out[a] = v;
    }
    CMatrix recon(msize_);
    embed_into(coeffs_out, recon);
    recon -= m;
    return recon.frobenius();
  }

  AlgebraElement pullback(const CMatrix& m, double* drift = nullptr) const {
    AlgebraElement x(dim_);
    double d = pullback_into(m, x.coeffs.data());
    if (drift) *drift = d;
    return x;
  }

 private:
  void build_gram() {
    // Real Gram of Re tr(B_a^† B_b); SPD for a linearly independent basis.
    std::vector<double> g(static_cast<size_t>(dim_) * dim_);
    const int mm = msize_ * msize_;
    for (int a = 0; a < dim_; ++a)
      for (int b = 0; b < dim_; ++b) {
        cplx s = 0.0;
        for (int i = 0; i < mm; ++i) s += std::conj(basis_[a].data()[i]) * basis_[b].data()[i];
        g[static_cast<size_t>(a) * dim_ + b] = s.real();
      }
    // invert via Gauss-Jordan on the real matrix
    std::vector<double> inv(static_cast<size_t>(dim_) * dim_, 0.0);
    for (int i = 0; i < dim_; ++i) inv[static_cast<size_t>(i) * dim_ + i] = 1.0;
    for (int col = 0; col < dim_; ++col) {
      int piv = col;
      double best = std::abs(g[static_cast<size_t>(col) * dim_ + col]);
      for (int r = col + 1; r < dim_; ++r)
        if (std::abs(g[static_cast<size_t>(r) * dim_ + col]) > best) {
          best = std::abs(g[static_cast<size_t>(r) * dim_ + col]);
          piv = r;
        }
      if (best < 1e-300) throw config_error("representation basis is degenerate: " + id_);
      for (int j = 0; j < dim_; ++j) {
        std::swap(g[static_cast<size_t>(piv) * dim_ + j], g[static_cast<size_t>(col) * dim_ + j]);
        std::swap(inv[static_cast<size_t>(piv) * dim_ + j], inv[static_cast<size_t>(col) * dim_ + j]);
      }
      const double d = 1.0 / g[static_cast<size_t>(col) * dim_ + col];
      for (int j = 0; j < dim_; ++j) {
        g[static_cast<size_t>(col) * dim_ + j] *= d;
        inv[static_cast<size_t>(col) * dim_ + j] *= d;
      }
      for (int r = 0; r < dim_; ++r) {
        if (r == col) continue;
        const double f = g[static_cast<size_t>(r) * dim_ + col];
        if (f == 0.0) continue;
        for (int j = 0; j < dim_; ++j) {
          g[static_cast<size_t>(r) * dim_ + j] -= f * g[static_cast<size_t>(col) * dim_ + j];
          inv[static_cast<size_t>(r) * dim_ + j] -= f * inv[static_cast<size_t>(col) * dim_ + j];
        }
      }
    }
    gram_inv_ = std::move(inv);
  }

  std::string id_;
  std::vector<CMatrix> basis_;
  std::vector<double> gram_inv_;
  int dim_ = 0;
  int msize_ = 0;
};

/// su(2) via the Pauli basis e_a = -(i/2) sigma_a; satisfies [e_a,e_b] = eps_{abk} e_k.
inline Representation make_su2_pauli() {
  CMatrix s1(2), s2(2), s3(2);
  s1(0, 1) = 1.0;
  s1(1, 0) = 1.0;
  s2(0, 1) = cplx(0, -1);
  s2(1, 0) = cplx(0, 1);
  s3(0, 0) = 1.0;
  s3(1, 1) = -1.0;
  const cplx f(0, -0.5);
  std::vector<CMatrix> basis = {f * s1, f * s2, f * s3};
  return Representation("su2-pauli", std::move(basis));
}

/// Commuting algebra represented on the diagonal torus: B_a = i E_aa.
inline Representation make_abelian_diag(int dim) {
  std::vector<CMatrix> basis;
  for (int a = 0; a < dim; ++a) {
    CMatrix b(dim);
    b(a, a) = cplx(0, 1);
    basis.push_back(std::move(b));
  }
  return Representation("abelian-diag", std::move(basis));
}

class RepresentationRegistry {
 public:
  static RepresentationRegistry& instance() {
    static RepresentationRegistry reg;
    return reg;
  }

  void add(std::shared_ptr<const Representation> rep) { reps_[rep->id()] = std::move(rep); }

  std::shared_ptr<const Representation> find(const std::string& id, int algebra_dim) const {
    auto it = reps_.find(id);
    if (it == reps_.end()) {
      if (id == "su2-pauli") {
        auto r = std::make_shared<Representation>(make_su2_pauli());
        reps_[id] = r;
        it = reps_.find(id);
      } else if (id == "abelian-diag") {
        auto r = std::make_shared<Representation>(make_abelian_diag(algebra_dim));
        reps_[id] = r;
        it = reps_.find(id);
      } else {
        throw config_error("no representation registered under id '" + id + "'");
      }
    }
    if (it->second->algebra_dim() != algebra_dim)
      throw config_error("representation '" + id + "' has algebra dimension " +
                         std::to_string(it->second->algebra_dim()) + ", need " +
                         std::to_string(algebra_dim));
    return it->second;
  }

 private:
  mutable std::map<std::string, std::shared_ptr<const Representation>> reps_;
};

inline std::shared_ptr<const Representation> default_representation(const StructureTensor& s) {
  if (s.is_zero()) return RepresentationRegistry::instance().find("abelian-diag", s.dim());
  return RepresentationRegistry::instance().find("su2-pauli", s.dim());
}

inline GroupElement group_exp(const AlgebraElement& v, const StructureTensor& s,
                              const std::string& rep_id = "su2-pauli") {
  auto rep = RepresentationRegistry::instance().find(rep_id, s.dim());
  return GroupElement(matrix_exp(rep->embed(v)));
}

inline AlgebraElement adjoint(const GroupElement& u, const AlgebraElement& x,
                              const Representation& rep) {
  CMatrix m = u.matrix * rep.embed(x) * u.matrix.inverse();
  double drift = 0.0;
  AlgebraElement r = rep.pullback(m, &drift);
  double scale = std::max(1.0, m.frobenius());
  if (drift > 1e-8 * scale)
    throw numerical_error("adjoint: conjugation left the algebra (drift " + std::to_string(drift) + ")");
  return r;
}

inline AlgebraElement adjoint(const GroupElement& u, const AlgebraElement& x,
                              const StructureTensor& s, const std::string& rep_id = "su2-pauli") {
  auto rep = RepresentationRegistry::instance().find(rep_id, s.dim());
  return adjoint(u, x, *rep);
}

}  // namespace ymtg
