#pragma once

#include <map>
#include <memory>

#include "ymtg/field.hpp"
#include "ymtg/lie.hpp"
#include "ymtg/projections.hpp"

namespace ymtg {

// Right-hand-side assembly for the split temporal-gauge system
//
//   box Adf   = -2 P[A_i, d_i A] + P[A_i, grad A_i] - P[A_i, [A_i, A]]
//   d_t Acf  = -lap^{-1} grad [A_i, d_t A_i]
//
// All brackets are dealiased: quadratic terms on the 3n/2 grid, the cubic
// chain on the 2n grid. Everything below takes and returns spectral fields;
// physical inputs are transformed on entry.

namespace detail {

struct DynWorkspace {
  TorusGrid grid;
  Dealiaser quad;
  Dealiaser cub;
  std::vector<fft::RealBuf> bufs;
  fft::CplxBuf ctmp;

  explicit DynWorkspace(const TorusGrid& g)
      : grid(g), quad(g, DealiasRule::Quadratic), cub(g, DealiasRule::Cubic), ctmp(g.spec_points()) {}

  double* buf(int slot, size_t pts) {
    if (slot >= static_cast<int>(bufs.size())) bufs.resize(slot + 1);
    if (bufs[slot].size() < pts) bufs[slot].assign(pts, 0.0);
    return bufs[slot].data();
  }
};

inline DynWorkspace& dyn_workspace(const TorusGrid& g) {
  thread_local std::map<std::pair<int, double>, std::unique_ptr<DynWorkspace>> cache;
  auto key = std::make_pair(g.n, g.length);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, std::make_unique<DynWorkspace>(g)).first;
  return *it->second;
}

/// spectral plane of d/dx_axis applied to src, written into ws.ctmp
inline const std::complex<double>* deriv_plane(DynWorkspace& ws, const std::complex<double>* src,
                                               int axis) {
  const TorusGrid& g = ws.grid;
  std::complex<double>* d = ws.ctmp.data();
  for_modes(g, [&](int ix, int iy, int iz, size_t idx) {
    const int ki[3] = {g.k_of(ix), g.k_of(iy), g.k_of(iz)};
    if (std::abs(ki[axis]) == g.n / 2) {
      d[idx] = 0.0;
      return;
    }
    const double xi = (2.0 * M_PI / g.length) * ki[axis];
    d[idx] = std::complex<double>(0.0, xi) * src[idx];
  });
  return d;
}

// out_k += coeff * sum_{(a,b,k)} c(a,b,k) f_a g_b, pointwise over npts
inline void bracket_axpy(const StructureTensor& S, double coeff, const double* const* f,
                         const double* const* g, double* const* out, size_t npts) {
  for (const auto& e : S.nonzeros()) {
    const double v = coeff * e.v;
    const double* fa = f[e.a];
    const double* gb = g[e.b];
    double* ok = out[e.k];
    for (size_t i = 0; i < npts; ++i) ok[i] += v * fa[i] * gb[i];
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------

struct CurvatureField {
  ScalarField f12, f13, f23;

  /// F(i,j) with sign; i != j, zero-based indices.
  ScalarField component(int i, int j) const {
    if (i == j) throw input_error("curvature component: i == j");
    const bool flip = i > j;
    if (flip) std::swap(i, j);
    const ScalarField& s = (i == 0) ? (j == 1 ? f12 : f13) : f23;
    return flip ? -1.0 * s : s;
  }
};

/// F_ij = d_i A_j - d_j A_i + [A_i, A_j] for (i,j) in {(0,1),(0,2),(1,2)}.
inline CurvatureField curvature(const VectorField& A, const StructureTensor& S) {
  const bool phys_in = (A.rep() == Rep::Physical);
  VectorField As = phys_in ? to_spectral(A) : A;
  CurvatureField F;
  ScalarField* out[3] = {&F.f12, &F.f13, &F.f23};
  const int pair_i[3] = {0, 0, 1}, pair_j[3] = {1, 2, 2};
  for (int p = 0; p < 3; ++p) {
    const int i = pair_i[p], j = pair_j[p];
    ScalarField lin = partial_derivative(As[j], i) - partial_derivative(As[i], j);
    if (!S.is_zero()) {
      auto& ws = detail::dyn_workspace(A.grid());
      const int dim = A.dim();
      const size_t npts = ws.quad.fine_points();
      std::vector<double*> fi(dim), gj(dim), ob(dim);
      for (int a = 0; a < dim; ++a) {
        fi[a] = ws.buf(a, npts);
        gj[a] = ws.buf(dim + a, npts);
        ob[a] = ws.buf(2 * dim + a, npts);
        ws.quad.to_fine(As[i].spec(a), fi[a]);
        ws.quad.to_fine(As[j].spec(a), gj[a]);
        std::fill(ob[a], ob[a] + npts, 0.0);
      }
      detail::bracket_axpy(S, 1.0, fi.data(), gj.data(), ob.data(), npts);
      ScalarField br(A.grid(), dim, Rep::Spectral);
      for (int a = 0; a < dim; ++a) ws.quad.to_band(ob[a], br.spec(a));
      lin += br;
    }
    *out[p] = phys_in ? to_physical(lin) : lin;
  }
  return F;
}

/// Antisymmetric derivative product d_i f * d_j g - d_j f * d_i g, per
/// coefficient, dealiased.
inline ScalarField null_Q(const ScalarField& f, const ScalarField& g, int i, int j) {
  if (i == j) throw input_error("null_Q: indices must differ");
  auto t1 = dealiased_product(partial_derivative(f, i), partial_derivative(g, j));
  auto t2 = dealiased_product(partial_derivative(f, j), partial_derivative(g, i));
  return t1 - t2;
}

namespace detail {

// out_j = -2 [X1_i, d_i Y_j] + [X2_i, d_j Y_i], dealiased, spectral, no P.
inline VectorField raw_quadratic(const VectorField& X1, const VectorField& X2,
                                 const VectorField& Y, const StructureTensor& S) {
  const TorusGrid& g = X1.grid();
  const int dim = X1.dim();
  auto& ws = dyn_workspace(g);
  const size_t npts = ws.quad.fine_points();

  VectorField out(g, dim, Rep::Spectral);
  if (S.is_zero()) return out;

  // slots: X1 (3*dim), X2 (3*dim, aliased to X1 if same object), dY (9*dim), out (dim)
  const bool same_x = (&X1 == &X2);
  std::vector<const double*> x1p(3 * dim), x2p(3 * dim);
  std::vector<const double*> dyp(9 * dim);
  int slot = 0;
  for (int i = 0; i < 3; ++i)
    for (int a = 0; a < dim; ++a) {
      double* b = ws.buf(slot++, npts);
      ws.quad.to_fine(X1[i].spec(a), b);
      x1p[i * dim + a] = b;
    }
  if (same_x) {
    x2p = x1p;
  } else {
    for (int i = 0; i < 3; ++i)
      for (int a = 0; a < dim; ++a) {
        double* b = ws.buf(slot++, npts);
        ws.quad.to_fine(X2[i].spec(a), b);
        x2p[i * dim + a] = b;
      }
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int a = 0; a < dim; ++a) {
        double* b = ws.buf(slot++, npts);
        ws.quad.to_fine(deriv_plane(ws, Y[j].spec(a), i), b);
        dyp[(i * 3 + j) * dim + a] = b;
      }

  std::vector<double*> acc(dim);
  for (int a = 0; a < dim; ++a) acc[a] = ws.buf(slot++, npts);

  for (int j = 0; j < 3; ++j) {
    for (int a = 0; a < dim; ++a) std::fill(acc[a], acc[a] + npts, 0.0);
    for (int i = 0; i < 3; ++i) {
      // -2 [X1_i, d_i Y_j]
      detail::bracket_axpy(S, -2.0, &x1p[i * dim], &dyp[(i * 3 + j) * dim],
                   const_cast<double* const*>(acc.data()), npts);
      // + [X2_i, d_j Y_i]
      detail::bracket_axpy(S, 1.0, &x2p[i * dim], &dyp[(j * 3 + i) * dim],
                   const_cast<double* const*>(acc.data()), npts);
    }
    for (int a = 0; a < dim; ++a) ws.quad.to_band(acc[a], out[j].spec(a));
  }
  return out;
}

// out_j = [A_i, [A_i, A_j]] via a chained product on the 2n grid, spectral.
inline VectorField raw_cubic(const VectorField& A, const StructureTensor& S) {
  const TorusGrid& g = A.grid();
  const int dim = A.dim();
  auto& ws = dyn_workspace(g);
  const size_t npts = ws.cub.fine_points();

  VectorField out(g, dim, Rep::Spectral);
  if (S.is_zero()) return out;

  std::vector<const double*> ap(3 * dim);
  int slot = 0;
  for (int i = 0; i < 3; ++i)
    for (int a = 0; a < dim; ++a) {
      double* b = ws.buf(slot++, npts);
      ws.cub.to_fine(A[i].spec(a), b);
      ap[i * dim + a] = b;
    }

  // inner_{ij} = [A_i, A_j] for the pairs (0,1), (0,2), (1,2); the chain
  // stays on the fine grid so the second product needs the 1/2-rule padding.
  const int pi[3] = {0, 0, 1}, pj[3] = {1, 2, 2};
  std::vector<double*> inner(3 * dim);
  for (int p = 0; p < 3; ++p)
    for (int a = 0; a < dim; ++a) {
      double* b = ws.buf(slot++, npts);
      std::fill(b, b + npts, 0.0);
      inner[p * dim + a] = b;
    }
  for (int p = 0; p < 3; ++p)
    bracket_axpy(S, 1.0, &ap[pi[p] * dim], &ap[pj[p] * dim],
                 const_cast<double* const*>(&inner[p * dim]), npts);

  std::vector<double*> acc(dim);
  for (int a = 0; a < dim; ++a) acc[a] = ws.buf(slot++, npts);

  auto pair_slot = [&](int i, int j, double& sign) {
    sign = (i < j) ? 1.0 : -1.0;
    if (i > j) std::swap(i, j);
    if (i == 0 && j == 1) return 0;
    if (i == 0 && j == 2) return 1;
    return 2;
  };

  for (int j = 0; j < 3; ++j) {
    for (int a = 0; a < dim; ++a) std::fill(acc[a], acc[a] + npts, 0.0);
    for (int i = 0; i < 3; ++i) {
      if (i == j) continue;
      double sign;
      const int p = pair_slot(i, j, sign);
      detail::bracket_axpy(S, sign, &ap[i * dim], &inner[p * dim],
                   const_cast<double* const*>(acc.data()), npts);
    }
    for (int a = 0; a < dim; ++a) ws.cub.to_band(acc[a], out[j].spec(a));
  }
  return out;
}

}  // namespace detail

/// Null form N(A1,A2) = -2 P[(P A1)_i, d_i A2] + P[(A1)_i, grad (A2)_i].
inline VectorField null_N(const VectorField& A1, const VectorField& A2,
                          const StructureTensor& S) {
  if (A1.grid() != A2.grid()) throw input_error("null_N: grid mismatch");
  const bool phys_in = (A1.rep() == Rep::Physical);
  VectorField a1 = phys_in ? to_spectral(A1) : A1;
  VectorField a2 = (A2.rep() == Rep::Physical) ? to_spectral(A2) : A2;
  VectorField pa1 = project_df(a1);
  VectorField raw = detail::raw_quadratic(pa1, a1, a2, S);
  VectorField n = project_df(raw);
  return phys_in ? to_physical(n) : n;
}

/// Sources of box Adf, exposed term by term. All fields spectral.
struct WaveTerms {
  VectorField null_self;  // N(Adf, Adf)
  VectorField df_cf;      // quadratic(Adf -> Acf)
  VectorField cf_df;      // quadratic(Acf -> Adf)
  VectorField cf_cf;      // quadratic(Acf -> Acf)
  VectorField cubic;      // -P[A_i, [A_i, A]]
  VectorField total;
};

/// Full right side of box Adf = ... for A = Adf + Acf, divergence-free output.
inline VectorField wave_rhs(const VectorField& A, const StructureTensor& S) {
  const bool phys_in = (A.rep() == Rep::Physical);
  VectorField a = phys_in ? to_spectral(A) : A;
  VectorField raw = detail::raw_quadratic(a, a, a, S);
  raw -= detail::raw_cubic(a, S);
  VectorField w = project_df(raw);
  return phys_in ? to_physical(w) : w;
}

/// Term decomposition of wave_rhs with A reconstructed as Adf + Acf.
inline WaveTerms wave_rhs_terms(const VectorField& Adf, const VectorField& Acf,
                                const StructureTensor& S) {
  VectorField df = (Adf.rep() == Rep::Physical) ? to_spectral(Adf) : Adf;
  VectorField cf = (Acf.rep() == Rep::Physical) ? to_spectral(Acf) : Acf;
  VectorField a = df + cf;
  WaveTerms t;
  t.null_self = project_df(detail::raw_quadratic(df, df, df, S));
  t.df_cf = project_df(detail::raw_quadratic(df, df, cf, S));
  t.cf_df = project_df(detail::raw_quadratic(cf, cf, df, S));
  t.cf_cf = project_df(detail::raw_quadratic(cf, cf, cf, S));
  VectorField cub = project_df(detail::raw_cubic(a, S));
  cub *= -1.0;
  t.cubic = cub;
  t.total = t.null_self + t.df_cf + t.cf_df + t.cf_cf + t.cubic;
  return t;
}

/// Right side of d_t Acf: -lap^{-1} grad [A_i, At_i]; curl-free by construction.
inline VectorField gauss_rhs(const VectorField& A, const VectorField& At,
                             const StructureTensor& S) {
  if (A.grid() != At.grid()) throw input_error("gauss_rhs: grid mismatch");
  const bool phys_in = (A.rep() == Rep::Physical);
  VectorField a = phys_in ? to_spectral(A) : A;
  VectorField at = (At.rep() == Rep::Physical) ? to_spectral(At) : At;

  const TorusGrid& g = A.grid();
  const int dim = A.dim();
  VectorField out(g, dim, Rep::Spectral);
  if (!S.is_zero()) {
    auto& ws = detail::dyn_workspace(g);
    const size_t npts = ws.quad.fine_points();
    std::vector<const double*> ap(3 * dim), atp(3 * dim);
    int slot = 0;
    for (int i = 0; i < 3; ++i)
      for (int a_ = 0; a_ < dim; ++a_) {
        double* b = ws.buf(slot++, npts);
        ws.quad.to_fine(a[i].spec(a_), b);
        ap[i * dim + a_] = b;
        double* bt = ws.buf(slot++, npts);
        ws.quad.to_fine(at[i].spec(a_), bt);
        atp[i * dim + a_] = bt;
      }
    std::vector<double*> acc(dim);
    for (int a_ = 0; a_ < dim; ++a_) {
      acc[a_] = ws.buf(slot++, npts);
      std::fill(acc[a_], acc[a_] + npts, 0.0);
    }
    for (int i = 0; i < 3; ++i)
      detail::bracket_axpy(S, 1.0, &ap[i * dim], &atp[i * dim],
                   const_cast<double* const*>(acc.data()), npts);

    ScalarField br(g, dim, Rep::Spectral);
    for (int a_ = 0; a_ < dim; ++a_) ws.quad.to_band(acc[a_], br.spec(a_));

    // -lap^{-1} grad: hat -> (i xi_j / |xi|^2) * br_hat, zero at xi = 0
    for (int a_ = 0; a_ < dim; ++a_) {
      const std::complex<double>* b = br.spec(a_);
      std::complex<double>* o0 = out[0].spec(a_);
      std::complex<double>* o1 = out[1].spec(a_);
      std::complex<double>* o2 = out[2].spec(a_);
      detail::for_modes(g, [&](int ix, int iy, int iz, size_t idx) {
        const double x1 = g.xi_of(ix), x2 = g.xi_of(iy), x3 = g.xi_of(iz);
        const double k2 = x1 * x1 + x2 * x2 + x3 * x3;
        if (k2 == 0.0) {
          o0[idx] = o1[idx] = o2[idx] = 0.0;
          return;
        }
        // -lap^{-1} grad: -(i xi_j)/(-|xi|^2) = +i xi_j / |xi|^2
        const std::complex<double> f = std::complex<double>(0.0, 1.0) * b[idx] / k2;
        o0[idx] = x1 * f;
        o1[idx] = x2 * f;
        o2[idx] = x3 * f;
      });
      detail::symmetrize_hermitian_planes(g, o0);
      detail::symmetrize_hermitian_planes(g, o1);
      detail::symmetrize_hermitian_planes(g, o2);
    }
  }
  return phys_in ? to_physical(out) : out;
}

// Resolve the curl-free velocity: Acf_t = gauss_rhs(A, Adf_t + Acf_t), which
// is linear in Acf_t with a contraction factor ~ ||A||. Warm starts come from
// the previous call inside a time stepper.
inline VectorField cf_velocity(const VectorField& A, const VectorField& Adf_t,
                               const StructureTensor& S, const VectorField* warm = nullptr,
                               int max_sweeps = 16) {
  VectorField a = (A.rep() == Rep::Physical) ? to_spectral(A) : A;
  VectorField adt = (Adf_t.rep() == Rep::Physical) ? to_spectral(Adf_t) : Adf_t;
  VectorField acft = warm ? *warm : VectorField(a.grid(), a.dim(), Rep::Spectral);
  if (S.is_zero()) return VectorField(a.grid(), a.dim(), Rep::Spectral);
  const double ref = std::max(l2_norm(adt) + l2_norm(a), 1e-30);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    VectorField next = gauss_rhs(a, adt + acft, S);
    const double delta = l2_norm(next - acft);
    acft = std::move(next);
    if (delta <= 1e-14 * ref) return acft;
  }
  throw numerical_error("cf_velocity: fixed point failed to contract (data too large?)");
}

/// L2 residual of the initial-data compatibility: ||div At + [A_i, At_i]||.
inline double compatibility_residual(const VectorField& A0, const VectorField& At0,
                                     const StructureTensor& S) {
  if (A0.grid() != At0.grid()) throw input_error("compatibility_residual: grid mismatch");
  VectorField a = (A0.rep() == Rep::Physical) ? to_spectral(A0) : A0;
  VectorField at = (At0.rep() == Rep::Physical) ? to_spectral(At0) : At0;
  ScalarField r = divergence(at);
  if (!S.is_zero()) {
    // reuse gauss_rhs's bracket via a dealiased pairwise assembly
    const TorusGrid& g = a.grid();
    const int dim = a.dim();
    auto& ws = detail::dyn_workspace(g);
    const size_t npts = ws.quad.fine_points();
    std::vector<const double*> ap(3 * dim), atp(3 * dim);
    int slot = 0;
    for (int i = 0; i < 3; ++i)
      for (int c = 0; c < dim; ++c) {
        double* b = ws.buf(slot++, npts);
        ws.quad.to_fine(a[i].spec(c), b);
        ap[i * dim + c] = b;
        double* bt = ws.buf(slot++, npts);
        ws.quad.to_fine(at[i].spec(c), bt);
        atp[i * dim + c] = bt;
      }
    std::vector<double*> acc(dim);
    for (int c = 0; c < dim; ++c) {
      acc[c] = ws.buf(slot++, npts);
      std::fill(acc[c], acc[c] + npts, 0.0);
    }
    for (int i = 0; i < 3; ++i)
      detail::bracket_axpy(S, 1.0, &ap[i * dim], &atp[i * dim],
                   const_cast<double* const*>(acc.data()), npts);
    ScalarField br(g, dim, Rep::Spectral);
    for (int c = 0; c < dim; ++c) ws.quad.to_band(acc[c], br.spec(c));
    r += br;
  }
  return l2_norm(r);
}

// Project a candidate velocity onto the compatibility set: the curl-free part
// comes from the bracket fixed point; on the torus the remaining zero-mode
// obstruction mean([A_i, At_i]) is cancelled by a constant df velocity kappa
// solving sum_i [mean(A_i), kappa_i] = -mean([A_i, At_i]) in least squares.
inline VectorField constraint_project_velocity(const VectorField& A, const VectorField& At_raw,
                                               const StructureTensor& S) {
  VectorField a = (A.rep() == Rep::Physical) ? to_spectral(A) : A;
  VectorField atdf = project_df((At_raw.rep() == Rep::Physical) ? to_spectral(At_raw) : At_raw);
  const int dim = a.dim();
  const TorusGrid& g = a.grid();
  const double L32 = std::pow(g.length, 1.5);

  std::vector<double> m(3 * dim);
  for (int i = 0; i < 3; ++i)
    for (int c = 0; c < dim; ++c) m[i * dim + c] = mean_value(a[i], c);

  VectorField at = atdf;
  VectorField acft(g, dim, Rep::Spectral);
  for (int outer = 0; outer < 24; ++outer) {
    if (!S.is_zero()) acft = cf_velocity(a, at, S);
    VectorField full = at + acft;

    // mu_k = mean([A_i, full_i])_k, evaluated on the fine grid
    std::vector<double> mu(dim, 0.0);
    {
      auto& ws = detail::dyn_workspace(g);
      const size_t npts = ws.quad.fine_points();
      std::vector<const double*> ap(3 * dim), atp(3 * dim);
      int slot = 0;
      for (int i = 0; i < 3; ++i)
        for (int c = 0; c < dim; ++c) {
          double* b = ws.buf(slot++, npts);
          ws.quad.to_fine(a[i].spec(c), b);
          ap[i * dim + c] = b;
          double* bt = ws.buf(slot++, npts);
          ws.quad.to_fine(full[i].spec(c), bt);
          atp[i * dim + c] = bt;
        }
      std::vector<double*> acc(dim);
      for (int c = 0; c < dim; ++c) {
        acc[c] = ws.buf(slot++, npts);
        std::fill(acc[c], acc[c] + npts, 0.0);
      }
      for (int i = 0; i < 3; ++i)
        detail::bracket_axpy(S, 1.0, &ap[i * dim], &atp[i * dim],
                     const_cast<double* const*>(acc.data()), npts);
      for (int c = 0; c < dim; ++c) {
        double s = 0;
        for (size_t p = 0; p < npts; ++p) s += acc[c][p];
        mu[c] = s / static_cast<double>(npts);
      }
    }

    double munorm = 0;
    for (double v : mu) munorm = std::max(munorm, std::abs(v));
    if (munorm < 1e-16) break;

    // least-squares kappa: L(kappa)_k = sum_i sum_{ab} c(a,b,k) m_ia kappa_ib
    const int nu = 3 * dim;
    std::vector<double> Lmat(static_cast<size_t>(dim) * nu, 0.0);
    for (const auto& e : S.nonzeros())
      for (int i = 0; i < 3; ++i)
        Lmat[static_cast<size_t>(e.k) * nu + (i * dim + e.b)] += e.v * m[i * dim + e.a];
    // normal equations (nu x nu) with a tiny ridge
    std::vector<double> N(static_cast<size_t>(nu) * nu, 0.0), rhs(nu, 0.0);
    for (int r = 0; r < nu; ++r) {
      for (int c = 0; c < nu; ++c) {
        double s = 0;
        for (int k = 0; k < dim; ++k)
          s += Lmat[static_cast<size_t>(k) * nu + r] * Lmat[static_cast<size_t>(k) * nu + c];
        N[static_cast<size_t>(r) * nu + c] = s + (r == c ? 1e-18 : 0.0);
      }
      double s = 0;
      for (int k = 0; k < dim; ++k) s += Lmat[static_cast<size_t>(k) * nu + r] * (-mu[k]);
      rhs[r] = s;
    }
    // solve N x = rhs by Gauss elimination
    std::vector<double> x(nu, 0.0);
    {
      std::vector<double> Aw = N, bw = rhs;
      for (int col = 0; col < nu; ++col) {
        int piv = col;
        for (int r = col + 1; r < nu; ++r)
          if (std::abs(Aw[static_cast<size_t>(r) * nu + col]) >
              std::abs(Aw[static_cast<size_t>(piv) * nu + col]))
            piv = r;
        for (int c = 0; c < nu; ++c)
          std::swap(Aw[static_cast<size_t>(piv) * nu + c], Aw[static_cast<size_t>(col) * nu + c]);
        std::swap(bw[piv], bw[col]);
        const double d = Aw[static_cast<size_t>(col) * nu + col];
        if (std::abs(d) < 1e-30) continue;
        for (int r = 0; r < nu; ++r) {
          if (r == col) continue;
          const double f = Aw[static_cast<size_t>(r) * nu + col] / d;
          for (int c = 0; c < nu; ++c)
            Aw[static_cast<size_t>(r) * nu + c] -= f * Aw[static_cast<size_t>(col) * nu + c];
          bw[r] -= f * bw[col];
        }
      }
      for (int r = 0; r < nu; ++r) {
        const double d = Aw[static_cast<size_t>(r) * nu + r];
        x[r] = std::abs(d) < 1e-30 ? 0.0 : bw[r] / d;
      }
    }
    for (int i = 0; i < 3; ++i)
      for (int c = 0; c < dim; ++c) at[i].spec(c)[0] += x[i * dim + c] * L32;
  }
  return at + acft;
}

// ---------------------------------------------------------------------------

struct State {
  double t = 0.0;
  VectorField Adf;
  VectorField Adf_t;
  VectorField Acf;
};

/// H = ||grad Adf||_2 + ||Acf_t||_2 + ||Adf_t||_2, Acf_t via the resolved
/// bracket fixed point.
inline double hamiltonian_proxy(const State& st, const StructureTensor& S) {
  VectorField adf = (st.Adf.rep() == Rep::Physical) ? to_spectral(st.Adf) : st.Adf;
  VectorField acf = (st.Acf.rep() == Rep::Physical) ? to_spectral(st.Acf) : st.Acf;
  double grad2 = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double v = l2_norm(partial_derivative(adf[j], i));
      grad2 += v * v;
    }
  VectorField acft = cf_velocity(adf + acf, st.Adf_t, S);
  return std::sqrt(grad2) + l2_norm(acft) + l2_norm(st.Adf_t);
}

}  // namespace ymtg
