#pragma once

#include <utility>
#include <vector>

#include "ymtg/dynamics.hpp"
#include "ymtg/field.hpp"
#include "ymtg/projections.hpp"
#include "ymtg/representation.hpp"

namespace ymtg {

// Gauge transformations A_i -> U A_i U^{-1} - (d_i U) U^{-1} and the
// iterative Coulomb fix of initial data. Group elements live on the grid in
// a fixed matrix representation; pointwise matrix algebra runs on the 3n/2
// fine grid so that products of band-limited factors come back alias-free,
// and results are truncated to the coarse band.

/// Grid of group elements; entry layout is plane-major (entry e = r*m + c).
struct GroupField {
  TorusGrid grid;
  int msize = 0;
  fft::CplxBuf data;

  GroupField() = default;
  GroupField(TorusGrid g, int m) : grid(g), msize(m), data(static_cast<size_t>(m) * m * g.points()) {}

  std::complex<double>* plane(int e) { return data.data() + static_cast<size_t>(e) * grid.points(); }
  const std::complex<double>* plane(int e) const {
    return data.data() + static_cast<size_t>(e) * grid.points();
  }

  void get(size_t p, CMatrix& out) const {
    for (int e = 0; e < msize * msize; ++e) out.data()[e] = plane(e)[p];
  }
  void set(size_t p, const CMatrix& m) {
    for (int e = 0; e < msize * msize; ++e) plane(e)[p] = m.data()[e];
  }

  static GroupField identity(TorusGrid g, int m) {
    GroupField u(g, m);
    for (int r = 0; r < m; ++r) {
      std::complex<double>* pl = u.plane(r * m + r);
      for (size_t p = 0; p < g.points(); ++p) pl[p] = 1.0;
    }
    return u;
  }
};

namespace detail {

// complex-plane padding between grids, full signed cube, Nyquist dropped
inline void pad_complex_modes(const TorusGrid& g, int m, const std::complex<double>* coarse_spec,
                              std::complex<double>* fine_spec) {
  const int n = g.n;
  std::fill(fine_spec, fine_spec + static_cast<size_t>(m) * m * m, std::complex<double>(0, 0));
  const int half = n / 2;
  auto wrap = [&](int k, int grid_n) { return k >= 0 ? k : k + grid_n; };
  for (int ix = 0; ix < n; ++ix) {
    const int kx = g.k_of(ix);
    if (std::abs(kx) == half) continue;
    for (int iy = 0; iy < n; ++iy) {
      const int ky = g.k_of(iy);
      if (std::abs(ky) == half) continue;
      for (int iz = 0; iz < n; ++iz) {
        const int kz = g.k_of(iz);
        if (std::abs(kz) == half) continue;
        fine_spec[(static_cast<size_t>(wrap(kx, m)) * m + wrap(ky, m)) * m + wrap(kz, m)] =
            coarse_spec[(static_cast<size_t>(ix) * n + iy) * n + iz];
      }
    }
  }
}

inline void truncate_complex_modes(const TorusGrid& g, int m, const std::complex<double>* fine_spec,
                                   std::complex<double>* coarse_spec) {
  const int n = g.n;
  const int half = n / 2;
  auto wrap = [&](int k, int grid_n) { return k >= 0 ? k : k + grid_n; };
  std::fill(coarse_spec, coarse_spec + g.points(), std::complex<double>(0, 0));
  for (int ix = 0; ix < n; ++ix) {
    const int kx = g.k_of(ix);
    if (std::abs(kx) == half) continue;
    for (int iy = 0; iy < n; ++iy) {
      const int ky = g.k_of(iy);
      if (std::abs(ky) == half) continue;
      for (int iz = 0; iz < n; ++iz) {
        const int kz = g.k_of(iz);
        if (std::abs(kz) == half) continue;
        coarse_spec[(static_cast<size_t>(ix) * n + iy) * n + iz] =
            fine_spec[(static_cast<size_t>(wrap(kx, m)) * m + wrap(ky, m)) * m + wrap(kz, m)];
      }
    }
  }
}

/// coarse physical complex plane -> fine physical complex plane
inline void complex_to_fine(const TorusGrid& g, int m, const std::complex<double>* phys,
                            std::complex<double>* fine_phys, fft::CplxBuf& work) {
  const size_t np = g.points();
  if (work.size() < np) work.resize(np);
  std::copy(phys, phys + np, work.begin());
  fft::c2c_3d(g.n, work.data(), FFTW_FORWARD);
  const double inv = 1.0 / static_cast<double>(np);
  for (size_t i = 0; i < np; ++i) work[i] *= inv;
  pad_complex_modes(g, m, work.data(), fine_phys);
  fft::c2c_3d(m, fine_phys, FFTW_BACKWARD);
}

/// fine physical complex plane -> coarse physical complex plane (band-limited)
inline void complex_to_coarse(const TorusGrid& g, int m, std::complex<double>* fine_phys,
                              std::complex<double>* phys, fft::CplxBuf& work) {
  const size_t npf = static_cast<size_t>(m) * m * m;
  fft::c2c_3d(m, fine_phys, FFTW_FORWARD);
  const double inv = 1.0 / static_cast<double>(npf);
  for (size_t i = 0; i < npf; ++i) fine_phys[i] *= inv;
  if (work.size() < g.points()) work.resize(g.points());
  truncate_complex_modes(g, m, fine_phys, work.data());
  fft::c2c_3d(g.n, work.data(), FFTW_BACKWARD);
  std::copy(work.begin(), work.begin() + g.points(), phys);
}

/// spectral derivative of a physical complex plane, in place
inline void complex_derivative(const TorusGrid& g, std::complex<double>* phys, int axis,
                               fft::CplxBuf& work) {
  const size_t np = g.points();
  if (work.size() < np) work.resize(np);
  std::copy(phys, phys + np, work.begin());
  fft::c2c_3d(g.n, work.data(), FFTW_FORWARD);
  const double inv = 1.0 / static_cast<double>(np);
  size_t idx = 0;
  for (int ix = 0; ix < g.n; ++ix)
    for (int iy = 0; iy < g.n; ++iy)
      for (int iz = 0; iz < g.n; ++iz, ++idx) {
        const int ki[3] = {g.k_of(ix), g.k_of(iy), g.k_of(iz)};
        if (std::abs(ki[axis]) == g.n / 2) {
          work[idx] = 0.0;
          continue;
        }
        work[idx] *= std::complex<double>(0.0, (2.0 * M_PI / g.length) * ki[axis]) * inv;
      }
  fft::c2c_3d(g.n, work.data(), FFTW_BACKWARD);
  std::copy(work.begin(), work.begin() + np, phys);
}

}  // namespace detail

/// Pointwise group exponential of an algebra-valued scalar field, evaluated
/// on the fine grid and band-limited back to the coarse one.
inline GroupField exp_field(const ScalarField& V, const Representation& rep) {
  if (V.dim() != rep.algebra_dim()) throw input_error("exp_field: algebra dimension mismatch");
  const TorusGrid& g = V.grid();
  const int m = rep.matrix_size();
  const int fine = (3 * g.n) / 2;
  const size_t npf = static_cast<size_t>(fine) * fine * fine;

  ScalarField Vs = (V.rep() == Rep::Spectral) ? V : to_spectral(V);
  Dealiaser dl(g, DealiasRule::Quadratic);
  std::vector<fft::RealBuf> vfine(V.dim());
  for (int a = 0; a < V.dim(); ++a) {
    vfine[a].assign(npf, 0.0);
    dl.to_fine(Vs.spec(a), vfine[a].data());
  }

  std::vector<fft::CplxBuf> ufine(m * m);
  for (auto& b : ufine) b.assign(npf, {0.0, 0.0});

  CMatrix vm(m), um(m);
  std::vector<double> coeffs(V.dim());
  for (size_t p = 0; p < npf; ++p) {
    for (int a = 0; a < V.dim(); ++a) coeffs[a] = vfine[a][p];
    rep.embed_into(coeffs.data(), vm);
    um = matrix_exp(vm);
    for (int e = 0; e < m * m; ++e) ufine[e][p] = um.data()[e];
  }

  GroupField U(g, m);
  fft::CplxBuf work;
  for (int e = 0; e < m * m; ++e)
    detail::complex_to_coarse(g, fine, ufine[e].data(), U.plane(e), work);
  return U;
}

/// Pointwise product U2*U1, dealiased through the fine grid.
inline GroupField compose(const GroupField& U2, const GroupField& U1) {
  if (U2.grid != U1.grid || U2.msize != U1.msize) throw input_error("compose: field mismatch");
  const TorusGrid& g = U2.grid;
  const int m = U2.msize;
  const int fine = (3 * g.n) / 2;
  const size_t npf = static_cast<size_t>(fine) * fine * fine;

  std::vector<fft::CplxBuf> a(m * m), b(m * m);
  fft::CplxBuf work;
  for (int e = 0; e < m * m; ++e) {
    a[e].assign(npf, {0.0, 0.0});
    b[e].assign(npf, {0.0, 0.0});
    detail::complex_to_fine(g, fine, U2.plane(e), a[e].data(), work);
    detail::complex_to_fine(g, fine, U1.plane(e), b[e].data(), work);
  }
  GroupField R(g, m);
  CMatrix ma(m), mb(m), mr(m);
  std::vector<fft::CplxBuf> rfine(m * m);
  for (auto& buf : rfine) buf.assign(npf, {0.0, 0.0});
  for (size_t p = 0; p < npf; ++p) {
    for (int e = 0; e < m * m; ++e) {
      ma.data()[e] = a[e][p];
      mb.data()[e] = b[e][p];
    }
    CMatrix::mul(ma, mb, mr);
    for (int e = 0; e < m * m; ++e) rfine[e][p] = mr.data()[e];
  }
  for (int e = 0; e < m * m; ++e)
    detail::complex_to_coarse(g, fine, rfine[e].data(), R.plane(e), work);
  return R;
}

/// Largest pointwise deviation of U from unitarity (diagnostic).
inline double unitarity_defect(const GroupField& U) {
  const int m = U.msize;
  CMatrix u(m), d(m);
  double worst = 0.0;
  for (size_t p = 0; p < U.grid.points(); ++p) {
    U.get(p, u);
    CMatrix::mul(u, u.dagger(), d);
    d -= CMatrix::identity(m);
    worst = std::max(worst, d.max_abs());
  }
  return worst;
}

/// A_i -> U A_i U^{-1} - (d_i U) U^{-1}, pulled back to algebra coefficients.
inline VectorField apply_gauge(const GroupField& U, const VectorField& A,
                               const Representation& rep) {
  if (U.grid != A.grid()) throw input_error("apply_gauge: grid mismatch");
  if (A.dim() != rep.algebra_dim()) throw input_error("apply_gauge: algebra dimension mismatch");
  const TorusGrid& g = A.grid();
  const int m = U.msize;
  const int dim = A.dim();
  const int fine = (3 * g.n) / 2;
  const size_t npf = static_cast<size_t>(fine) * fine * fine;

  // fine-grid copies: U entries, their three derivatives, A coefficients
  std::vector<fft::CplxBuf> uf(m * m);
  std::vector<std::vector<fft::CplxBuf>> duf(3, std::vector<fft::CplxBuf>(m * m));
  fft::CplxBuf work;
  for (int e = 0; e < m * m; ++e) {
    uf[e].assign(npf, {0.0, 0.0});
    detail::complex_to_fine(g, fine, U.plane(e), uf[e].data(), work);
    for (int axis = 0; axis < 3; ++axis) {
      fft::CplxBuf dplane(g.points());
      std::copy(U.plane(e), U.plane(e) + g.points(), dplane.begin());
      detail::complex_derivative(g, dplane.data(), axis, work);
      duf[axis][e].assign(npf, {0.0, 0.0});
      detail::complex_to_fine(g, fine, dplane.data(), duf[axis][e].data(), work);
    }
  }
  VectorField As = (A.rep() == Rep::Physical) ? to_spectral(A) : A;
  Dealiaser dl(g, DealiasRule::Quadratic);
  std::vector<std::vector<fft::RealBuf>> af(3, std::vector<fft::RealBuf>(dim));
  for (int i = 0; i < 3; ++i)
    for (int a = 0; a < dim; ++a) {
      af[i][a].assign(npf, 0.0);
      dl.to_fine(As[i].spec(a), af[i][a].data());
    }

  std::vector<std::vector<fft::RealBuf>> outf(3, std::vector<fft::RealBuf>(dim));
  for (int i = 0; i < 3; ++i)
    for (int a = 0; a < dim; ++a) outf[i][a].assign(npf, 0.0);

  CMatrix u(m), uinv(m), ma(m), t1(m), t2(m);
  std::vector<double> coeffs(dim), pulled(dim);
  double worst_drift = 0.0, scale = 0.0;
  for (size_t p = 0; p < npf; ++p) {
    for (int e = 0; e < m * m; ++e) u.data()[e] = uf[e][p];
    uinv = u.inverse();
    for (int i = 0; i < 3; ++i) {
      for (int a = 0; a < dim; ++a) coeffs[a] = af[i][a][p];
      rep.embed_into(coeffs.data(), ma);
      CMatrix::mul(u, ma, t1);
      CMatrix::mul(t1, uinv, t2);  // U A U^{-1}
      for (int e = 0; e < m * m; ++e) t1.data()[e] = duf[i][e][p];
      CMatrix::mul(t1, uinv, ma);  // (dU) U^{-1}
      t2 -= ma;
      const double drift = rep.pullback_into(t2, pulled.data());
      worst_drift = std::max(worst_drift, drift);
      scale = std::max(scale, t2.frobenius());
      for (int a = 0; a < dim; ++a) outf[i][a][p] = pulled[a];
    }
  }
  if (worst_drift > 1e-9 * std::max(scale, 1e-30))
    throw numerical_error("apply_gauge: transformed field left the algebra (drift " +
                          std::to_string(worst_drift) + ")");

  VectorField out(g, dim, Rep::Spectral);
  for (int i = 0; i < 3; ++i)
    for (int a = 0; a < dim; ++a) dl.to_band(outf[i][a].data(), out[i].spec(a));
  return (A.rep() == Rep::Physical) ? to_physical(out) : out;
}

// ---------------------------------------------------------------------------

struct GaugeTransformResult {
  VectorField transformed;
  GroupField U_total;
  int iterations = 0;
  std::vector<double> residual_history;  // ||A^cf||_{H^s} before each transform + final
  std::vector<double> xnorm_history;     // ||grad V||_{H^s} per executed transform
  bool large_data_warning = false;
};

// One gauge transform per sweep: V = Hodge potential of the curl-free part,
// U = exp(V), A <- gauge(U, A). For small data the curl-free residual
// contracts geometrically until the tolerance is reached.
inline GaugeTransformResult coulomb_fix(const VectorField& A0, const StructureTensor& S,
                                        double s = 0.8, double tol = 1e-10, int max_iter = 32,
                                        const std::string& rep_id = "") {
  auto rep = rep_id.empty() ? default_representation(S)
                            : RepresentationRegistry::instance().find(rep_id, S.dim());
  GaugeTransformResult res;
  res.large_data_warning = sobolev_norm(A0, s) > 1.0;
  res.U_total = GroupField::identity(A0.grid(), rep->matrix_size());

  VectorField A = (A0.rep() == Rep::Spectral) ? A0 : to_spectral(A0);
  for (int iter = 0; iter <= max_iter; ++iter) {
    VectorField acf = project_cf(A);
    const double resid = sobolev_norm(acf, s);
    res.residual_history.push_back(resid);
    if (resid <= tol) {
      res.iterations = iter;
      res.transformed = (A0.rep() == Rep::Physical) ? to_physical(A) : A;
      return res;
    }
    if (iter == max_iter) break;
    ScalarField V = hodge_potential(acf);
    res.xnorm_history.push_back(grad_sobolev_norm(V, s));
    GroupField U = exp_field(V, *rep);
    A = apply_gauge(U, A, *rep);
    res.U_total = compose(U, res.U_total);
  }
  throw nonconvergence_error("coulomb_fix: tolerance not reached within max_iter",
                             res.residual_history);
}

}  // namespace ymtg
