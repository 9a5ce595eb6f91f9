#pragma once

#include <cmath>

#include "ymtg/field.hpp"

namespace ymtg {

// Leray-Hodge splitting on the torus. Per mode xi != 0:
//   df part: A_hat - xi (xi.A_hat)/|xi|^2      (divergence-free)
//   cf part: xi (xi.A_hat)/|xi|^2              (curl-free)
// The xi = 0 mode is assigned wholly to the df part, so the cf part always
// integrates to a potential.

namespace detail {

enum class Part { Df, Cf };

inline VectorField project_part(const VectorField& A, Part which) {
  const bool phys_in = (A.rep() == Rep::Physical);
  VectorField S = phys_in ? to_spectral(A) : A;
  const TorusGrid& g = A.grid();
  VectorField out(g, A.dim(), Rep::Spectral);
  for (int a = 0; a < A.dim(); ++a) {
    const std::complex<double>* s0 = S[0].spec(a);
    const std::complex<double>* s1 = S[1].spec(a);
    const std::complex<double>* s2 = S[2].spec(a);
    std::complex<double>* o0 = out[0].spec(a);
    std::complex<double>* o1 = out[1].spec(a);
    std::complex<double>* o2 = out[2].spec(a);
    for_modes(g, [&](int ix, int iy, int iz, size_t idx) {
      const double x1 = g.xi_of(ix), x2 = g.xi_of(iy), x3 = g.xi_of(iz);
      const double k2 = x1 * x1 + x2 * x2 + x3 * x3;
      if (k2 == 0.0) {
        if (which == Part::Df) {
          o0[idx] = s0[idx];
          o1[idx] = s1[idx];
          o2[idx] = s2[idx];
        }
        return;
      }
      const std::complex<double> dot = (x1 * s0[idx] + x2 * s1[idx] + x3 * s2[idx]) / k2;
      if (which == Part::Cf) {
        o0[idx] = x1 * dot;
        o1[idx] = x2 * dot;
        o2[idx] = x3 * dot;
      } else {
        o0[idx] = s0[idx] - x1 * dot;
        o1[idx] = s1[idx] - x2 * dot;
        o2[idx] = s2[idx] - x3 * dot;
      }
    });
    // the +n/2 frequency convention breaks conjugation on Nyquist rows
    symmetrize_hermitian_planes(g, o0);
    symmetrize_hermitian_planes(g, o1);
    symmetrize_hermitian_planes(g, o2);
  }
  return phys_in ? to_physical(out) : out;
}

}  // namespace detail

inline VectorField project_df(const VectorField& A) {
  return detail::project_part(A, detail::Part::Df);
}

inline VectorField project_cf(const VectorField& A) {
  return detail::project_part(A, detail::Part::Cf);
}

struct SplitField {
  VectorField df;
  VectorField cf;
};

inline SplitField split(const VectorField& A) { return {project_df(A), project_cf(A)}; }

inline ScalarField divergence(const VectorField& A) {
  ScalarField d = partial_derivative(A[0], 0);
  d += partial_derivative(A[1], 1);
  d += partial_derivative(A[2], 2);
  return d;
}

inline VectorField curl(const VectorField& A) {
  VectorField r(A.grid(), A.dim(), A.rep());
  r[0] = partial_derivative(A[2], 1) - partial_derivative(A[1], 2);
  r[1] = partial_derivative(A[0], 2) - partial_derivative(A[2], 0);
  r[2] = partial_derivative(A[1], 0) - partial_derivative(A[0], 1);
  return r;
}

inline double div_residual(const VectorField& A) { return l2_norm(divergence(A)); }
inline double curl_residual(const VectorField& A) { return l2_norm(curl(A)); }

// Potential phi with grad(phi) = Acf: per mode phi_hat = (xi.A_hat)/(i|xi|^2),
// zero mode set to zero. Rejects inputs that are measurably not curl-free.
inline ScalarField hodge_potential(const VectorField& Acf) {
  const double scale = l2_norm(Acf);
  if (scale > 0.0 && curl_residual(Acf) > 1e-9 * scale)
    throw input_error("hodge_potential: input is not curl-free");
  const bool phys_in = (Acf.rep() == Rep::Physical);
  VectorField S = phys_in ? to_spectral(Acf) : Acf;
  const TorusGrid& g = Acf.grid();
  ScalarField phi(g, Acf.dim(), Rep::Spectral);
  for (int a = 0; a < Acf.dim(); ++a) {
    const std::complex<double>* s0 = S[0].spec(a);
    const std::complex<double>* s1 = S[1].spec(a);
    const std::complex<double>* s2 = S[2].spec(a);
    std::complex<double>* p = phi.spec(a);
    detail::for_modes(g, [&](int ix, int iy, int iz, size_t idx) {
      const double x1 = g.xi_of(ix), x2 = g.xi_of(iy), x3 = g.xi_of(iz);
      const double k2 = x1 * x1 + x2 * x2 + x3 * x3;
      if (k2 == 0.0) {
        p[idx] = 0.0;
        return;
      }
      const std::complex<double> dot = x1 * s0[idx] + x2 * s1[idx] + x3 * s2[idx];
      p[idx] = dot / std::complex<double>(0.0, k2);
    });
    detail::symmetrize_hermitian_planes(g, p);
  }
  return phys_in ? to_physical(phi) : phi;
}

/// The X-norm used by the gauge iteration: ||grad V||_{H^s}.
inline double grad_sobolev_norm(const ScalarField& v, double s) {
  double acc = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double t = sobolev_norm(partial_derivative(v, i), s);
    acc += t * t;
  }
  return std::sqrt(acc);
}

}  // namespace ymtg
