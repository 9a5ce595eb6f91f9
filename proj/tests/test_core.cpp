#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <map>
#include <vector>

#include "ymtg/field.hpp"
#include "ymtg/lie.hpp"
#include "ymtg/projections.hpp"
#include "ymtg/representation.hpp"
#include "ymtg/rng.hpp"

using namespace ymtg;
using Catch::Approx;

namespace {

AlgebraElement random_su2(CounterRng& rng) {
  AlgebraElement x(3);
  for (int a = 0; a < 3; ++a) x[a] = rng.normal();
  return x;
}

// brute-force cross product of coefficient vectors
AlgebraElement cross_oracle(const AlgebraElement& x, const AlgebraElement& y) {
  AlgebraElement r(3);
  r[0] = x[1] * y[2] - x[2] * y[1];
  r[1] = x[2] * y[0] - x[0] * y[2];
  r[2] = x[0] * y[1] - x[1] * y[0];
  return r;
}

ScalarField random_scalar(const TorusGrid& g, int dim, CounterRng& rng, int band = 0) {
  // random spectral content below the given band (0 = everything but Nyquist)
  ScalarField f(g, dim, Rep::Physical);
  const int kmax = band > 0 ? band : g.n / 2 - 1;
  for (int a = 0; a < dim; ++a) {
    double* p = f.phys(a);
    // superpose random cosines so the field is exactly band-limited
    for (int m = 0; m < 12; ++m) {
      int k1 = static_cast<int>(rng.below(2 * kmax + 1)) - kmax;
      int k2 = static_cast<int>(rng.below(2 * kmax + 1)) - kmax;
      int k3 = static_cast<int>(rng.below(2 * kmax + 1)) - kmax;
      const double amp = rng.normal();
      const double phase = rng.uniform(0.0, 2.0 * M_PI);
      const double h = g.spacing();
      for (int ix = 0; ix < g.n; ++ix)
        for (int iy = 0; iy < g.n; ++iy)
          for (int iz = 0; iz < g.n; ++iz)
            p[g.pidx(ix, iy, iz)] +=
                amp * std::cos(k1 * h * ix + k2 * h * iy + k3 * h * iz + phase);
    }
  }
  return f;
}

VectorField random_vector(const TorusGrid& g, int dim, CounterRng& rng, int band = 0) {
  VectorField v(g, dim, Rep::Physical);
  for (int i = 0; i < 3; ++i) v[i] = random_scalar(g, dim, rng, band);
  return v;
}

// O(N^2) reference DFT of one coefficient plane, full complex spectrum
std::vector<std::complex<double>> naive_dft(const ScalarField& f, int a) {
  const TorusGrid& g = f.grid();
  const int n = g.n;
  std::vector<std::complex<double>> out(g.points());
  const double scale = std::pow(g.length, 1.5) / static_cast<double>(g.points());
  for (int kx = 0; kx < n; ++kx)
    for (int ky = 0; ky < n; ++ky)
      for (int kz = 0; kz < n; ++kz) {
        std::complex<double> acc = 0.0;
        for (int ix = 0; ix < n; ++ix)
          for (int iy = 0; iy < n; ++iy)
            for (int iz = 0; iz < n; ++iz) {
              const double ph = -2.0 * M_PI / n * (kx * ix + ky * iy + kz * iz);
              acc += f.at(a, ix, iy, iz) * std::polar(1.0, ph);
            }
        out[(static_cast<size_t>(kx) * n + ky) * n + kz] = scale * acc;
      }
  return out;
}

}  // namespace

TEST_CASE("su(2) bracket matches defining relations and the cross product") {
  auto su2 = StructureTensor::su2();
  auto e1 = AlgebraElement::basis(3, 0), e2 = AlgebraElement::basis(3, 1),
       e3 = AlgebraElement::basis(3, 2);

  CHECK(max_abs(bracket(e1, e2, su2) - e3) == 0.0);
  CHECK(max_abs(bracket(e2, e3, su2) - e1) == 0.0);

  CounterRng rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    auto x = random_su2(rng), y = random_su2(rng);
    CHECK(max_abs(bracket(x, x, su2)) == 0.0);
    CHECK(max_abs(bracket(x, y, su2) - cross_oracle(x, y)) < 1e-14);
  }
}

TEST_CASE("bracket is bilinear and antisymmetric; abelian bracket vanishes") {
  auto su2 = StructureTensor::su2();
  CounterRng rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    auto x = random_su2(rng), y = random_su2(rng), z = random_su2(rng);
    const double a = rng.normal(), b = rng.normal();
    auto lhs = bracket(a * x + b * y, z, su2);
    auto rhs = a * bracket(x, z, su2) + b * bracket(y, z, su2);
    CHECK(max_abs(lhs - rhs) < 1e-14 * (1.0 + max_abs(lhs)));
    CHECK(max_abs(bracket(x, y, su2) + bracket(y, x, su2)) < 1e-14);
  }

  auto ab = StructureTensor::abelian(4);
  CounterRng rng2(9);
  AlgebraElement u(4), v(4);
  for (int a = 0; a < 4; ++a) {
    u[a] = rng2.normal();
    v[a] = rng2.normal();
  }
  CHECK(max_abs(bracket(u, v, ab)) == 0.0);
}

TEST_CASE("bracket rejects dimension mismatch") {
  auto su2 = StructureTensor::su2();
  AlgebraElement bad(2);
  CHECK_THROWS_AS(bracket(bad, AlgebraElement(3), su2), input_error);
}

TEST_CASE("jacobi residual: su(2) and abelian are exact, perturbation is detected") {
  CHECK(jacobi_residual(StructureTensor::su2()) <= 1e-15);
  CHECK(jacobi_residual(StructureTensor::abelian(5)) == 0.0);

  auto bad = StructureTensor::su2();
  bad.set(0, 1, 2, bad.c(0, 1, 2) + 1e-3);
  CHECK(jacobi_residual(bad) >= 1e-4);
  CHECK(StructureTensor::su2().antisymmetry_error() == 0.0);
  CHECK(bad.antisymmetry_error() >= 1e-4);
}

TEST_CASE("structure tensor file round trip") {
  const char* path = "su2_tensor.txt";
  {
    std::FILE* f = std::fopen(path, "w");
    std::fprintf(f, "3\n# eps tensor, 1-based indices\n");
    std::fprintf(f, "1 2 3 1.0\n2 1 3 -1.0\n2 3 1 1.0\n3 2 1 -1.0\n3 1 2 1.0\n1 3 2 -1.0\n");
    std::fclose(f);
  }
  auto s = StructureTensor::from_file(path);
  REQUIRE(s.dim() == 3);
  auto ref = StructureTensor::su2();
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int k = 0; k < 3; ++k) CHECK(s.c(a, b, k) == ref.c(a, b, k));

  {
    std::FILE* f = std::fopen("bad_tensor.txt", "w");
    std::fprintf(f, "3\n4 1 1 1.0\n");
    std::fclose(f);
  }
  CHECK_THROWS_AS(StructureTensor::from_file("bad_tensor.txt"), io_error);
  CHECK_THROWS_AS(StructureTensor::from_file("no_such_file.txt"), io_error);
}

TEST_CASE("group_exp: identity, diagonal formula, inverse") {
  auto su2 = StructureTensor::su2();
  CHECK((group_exp(AlgebraElement(3), su2).matrix - CMatrix::identity(2)).max_abs() == 0.0);

  const double theta = 0.83;
  AlgebraElement v(3);
  v[2] = theta;
  auto u = group_exp(v, su2);
  CHECK(std::abs(u.matrix(0, 0) - std::polar(1.0, -theta / 2)) < 1e-12);
  CHECK(std::abs(u.matrix(1, 1) - std::polar(1.0, theta / 2)) < 1e-12);
  CHECK(std::abs(u.matrix(0, 1)) < 1e-14);

  // truncated-series oracle, no scaling step
  auto rep = RepresentationRegistry::instance().find("su2-pauli", 3);
  CMatrix x = rep->embed(v);
  CMatrix series = CMatrix::identity(2), term = CMatrix::identity(2), tmp(2);
  for (int k = 1; k <= 30; ++k) {
    CMatrix::mul(term, x, tmp);
    tmp *= cplx(1.0 / k, 0);
    term = tmp;
    series += term;
  }
  CHECK((u.matrix - series).max_abs() < 1e-12);

  AlgebraElement w(3);
  CounterRng rng(3);
  for (int a = 0; a < 3; ++a) w[a] = 0.8 * rng.normal();
  auto uu = group_exp(w, su2);
  auto ui = group_exp(-1.0 * w, su2);
  CHECK((uu.matrix * ui.matrix - CMatrix::identity(2)).max_abs() < 1e-12);
  // default representation is unitary with unit determinant
  CHECK((uu.matrix * uu.matrix.dagger() - CMatrix::identity(2)).max_abs() < 1e-12);
  CHECK(std::abs(uu.matrix.det2() - 1.0) < 1e-12);
}

TEST_CASE("group_exp rejects unregistered representations") {
  CHECK_THROWS_AS(group_exp(AlgebraElement(3), StructureTensor::su2(), "nope"), config_error);
}

TEST_CASE("adjoint: identity, rotation about e3, automorphism, isometry") {
  auto su2 = StructureTensor::su2();
  auto rep = RepresentationRegistry::instance().find("su2-pauli", 3);
  CounterRng rng(11);

  auto x = random_su2(rng);
  GroupElement id(CMatrix::identity(2));
  CHECK(max_abs(adjoint(id, x, su2) - x) < 1e-13);

  const double th = 0.4777;
  AlgebraElement v(3);
  v[2] = th;
  auto u = group_exp(v, su2);
  auto r = adjoint(u, AlgebraElement::basis(3, 0), su2);
  CHECK(r[0] == Approx(std::cos(th)).margin(1e-12));
  CHECK(r[1] == Approx(std::sin(th)).margin(1e-12));
  CHECK(std::abs(r[2]) < 1e-12);

  // dense conjugation oracle
  CMatrix m = u.matrix * rep->embed(AlgebraElement::basis(3, 0)) * u.matrix.inverse();
  CMatrix back = rep->embed(r);
  CHECK((m - back).max_abs() < 1e-12);

  for (int trial = 0; trial < 10; ++trial) {
    auto a = random_su2(rng), b = random_su2(rng);
    AlgebraElement w(3);
    for (int i = 0; i < 3; ++i) w[i] = rng.normal();
    auto g = group_exp(w, su2);
    auto lhs = adjoint(g, bracket(a, b, su2), su2);
    auto rhs = bracket(adjoint(g, a, su2), adjoint(g, b, su2), su2);
    CHECK(max_abs(lhs - rhs) < 1e-12);

    double na = 0, nb = 0;
    auto ga = adjoint(g, a, su2);
    for (int i = 0; i < 3; ++i) {
      na += a[i] * a[i];
      nb += ga[i] * ga[i];
    }
    CHECK(std::sqrt(nb) == Approx(std::sqrt(na)).epsilon(1e-12));
  }
}

// ---------------------------------------------------------------------------

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(TorusGrid(6), input_error);
  CHECK_THROWS_AS(TorusGrid(9), input_error);
  CHECK_THROWS_AS(TorusGrid(16, -1.0), input_error);
  TorusGrid g(16);
  CHECK(g.k_of(15) == -1);
  CHECK(g.k_of(8) == 8);
}

TEST_CASE("transform: constant and plane-wave spectra") {
  TorusGrid g(8);
  ScalarField f(g, 1, Rep::Physical);
  for (size_t i = 0; i < g.points(); ++i) f.phys(0)[i] = 2.5;
  auto s = to_spectral(f);
  const double L32 = std::pow(g.length, 1.5);
  CHECK(std::abs(s.spec(0)[g.sidx(0, 0, 0)] - 2.5 * L32) < 1e-12 * L32);
  double off = 0;
  detail::for_modes(g, [&](int ix, int iy, int iz, size_t idx) {
    if (ix || iy || iz) off = std::max(off, std::abs(s.spec(0)[idx]));
  });
  CHECK(off < 1e-12);

  ScalarField c(g, 1, Rep::Physical);
  for (int ix = 0; ix < g.n; ++ix)
    for (int iy = 0; iy < g.n; ++iy)
      for (int iz = 0; iz < g.n; ++iz) c.at(0, ix, iy, iz) = std::cos(g.spacing() * ix);
  auto cs = to_spectral(c);
  CHECK(std::abs(cs.spec(0)[g.sidx(1, 0, 0)] - L32 / 2) < 1e-12 * L32);
  CHECK(std::abs(cs.spec(0)[g.sidx(g.n - 1, 0, 0)] - L32 / 2) < 1e-12 * L32);

  // inverse of a single conjugate mode pair is the cosine profile
  ScalarField sp(g, 1, Rep::Spectral);
  sp.spec(0)[g.sidx(1, 0, 0)] = L32 / 2;
  sp.spec(0)[g.sidx(g.n - 1, 0, 0)] = L32 / 2;
  auto p = to_physical(sp);
  double worst = 0;
  for (int ix = 0; ix < g.n; ++ix)
    worst = std::max(worst, std::abs(p.at(0, ix, 3, 5) - std::cos(g.spacing() * ix)));
  CHECK(worst < 1e-13);

  ScalarField z(g, 1, Rep::Spectral);
  auto zp = to_physical(z);
  CHECK(l2_norm(zp) == 0.0);
}

TEST_CASE("transform round trip against the direct DFT oracle at n=8") {
  TorusGrid g(8);
  CounterRng rng(5);
  auto f = random_scalar(g, 2, rng);
  auto s = to_spectral(f);

  for (int a = 0; a < 2; ++a) {
    auto ref = naive_dft(f, a);
    double worst = 0, scale = 0;
    detail::for_modes(g, [&](int ix, int iy, int iz, size_t idx) {
      const auto r = ref[(static_cast<size_t>(ix) * g.n + iy) * g.n + iz];
      worst = std::max(worst, std::abs(s.spec(a)[idx] - r));
      scale = std::max(scale, std::abs(r));
    });
    CHECK(worst < 1e-13 * scale);
  }

  auto back = to_physical(s);
  double worst = 0, scale = 0;
  for (size_t i = 0; i < g.points(); ++i) {
    worst = std::max(worst, std::abs(back.phys(0)[i] - f.phys(0)[i]));
    scale = std::max(scale, std::abs(f.phys(0)[i]));
  }
  CHECK(worst <= 1e-13 * scale);

  bool noop = false;
  auto s2 = to_spectral(s, &noop);
  CHECK(noop);
}

TEST_CASE("to_physical rejects corrupted Hermitian symmetry") {
  TorusGrid g(8);
  CounterRng rng(6);
  auto s = to_spectral(random_scalar(g, 1, rng));
  s.spec(0)[g.sidx(1, 2, 0)] += std::complex<double>(0.5 * max_spec_abs(s), 0.0);
  CHECK_THROWS_AS(to_physical(s), numerical_error);
}

TEST_CASE("Parseval equality between physical and spectral norms") {
  TorusGrid g(16);
  CounterRng rng(8);
  auto f = random_scalar(g, 3, rng);
  const double phys = l2_norm(f);
  const double spec = sobolev_norm(f, 0.0);
  CHECK(phys == Approx(spec).epsilon(1e-13));
}

TEST_CASE("derivatives: exact trig, independence, commutation, FD oracle") {
  TorusGrid g(16);
  ScalarField c(g, 1, Rep::Physical);
  for (int ix = 0; ix < g.n; ++ix)
    for (int iy = 0; iy < g.n; ++iy)
      for (int iz = 0; iz < g.n; ++iz) c.at(0, ix, iy, iz) = std::cos(g.spacing() * ix);
  auto d1 = partial_derivative(c, 0);
  double worst = 0;
  for (int ix = 0; ix < g.n; ++ix)
    worst = std::max(worst, std::abs(d1.at(0, ix, 1, 2) + std::sin(g.spacing() * ix)));
  CHECK(worst < 1e-13);
  CHECK(l2_norm(partial_derivative(c, 1)) < 1e-13);

  CounterRng rng(10);
  auto f = random_scalar(g, 1, rng, 5);
  auto d12 = partial_derivative(partial_derivative(f, 0), 1);
  auto d21 = partial_derivative(partial_derivative(f, 1), 0);
  CHECK(l2_norm(d12 - d21) < 1e-13 * std::max(1.0, l2_norm(d12)));

  // second-order centered differences at two resolutions
  auto fd_error = [&](int n) {
    TorusGrid gg(n);
    CounterRng r2(10);
    auto ff = random_scalar(gg, 1, r2, 5);
    auto ds = partial_derivative(ff, 0);
    const double h = gg.spacing();
    double err = 0;
    for (int ix = 0; ix < n; ++ix)
      for (int iy = 0; iy < n; ++iy)
        for (int iz = 0; iz < n; ++iz) {
          const double fd =
              (ff.at(0, (ix + 1) % n, iy, iz) - ff.at(0, (ix + n - 1) % n, iy, iz)) / (2 * h);
          err = std::max(err, std::abs(fd - ds.at(0, ix, iy, iz)));
        }
    return err;
  };
  const double e64 = fd_error(64), e128 = fd_error(128);
  CHECK(e64 / e128 > 3.0);  // h^2 convergence gives ratio ~4
  CHECK(e64 / e128 < 5.0);
}

TEST_CASE("inverse laplacian: eigenfunction, zero mode, identity check") {
  TorusGrid g(16);
  ScalarField c(g, 1, Rep::Physical);
  for (int ix = 0; ix < g.n; ++ix)
    for (int iy = 0; iy < g.n; ++iy)
      for (int iz = 0; iz < g.n; ++iz) c.at(0, ix, iy, iz) = -std::cos(g.spacing() * ix);
  auto u = inverse_laplacian(c);
  double worst = 0;
  for (int ix = 0; ix < g.n; ++ix)
    worst = std::max(worst, std::abs(u.at(0, ix, 0, 0) - std::cos(g.spacing() * ix)));
  CHECK(worst < 1e-13);

  ScalarField k(g, 1, Rep::Physical);
  for (size_t i = 0; i < g.points(); ++i) k.phys(0)[i] = 3.0;
  CHECK(l2_norm(inverse_laplacian(k)) < 1e-14);

  CounterRng rng(12);
  auto f = random_scalar(g, 2, rng, 6);
  auto lap = [&](const ScalarField& x) {
    ScalarField r = partial_derivative(partial_derivative(x, 0), 0);
    r += partial_derivative(partial_derivative(x, 1), 1);
    r += partial_derivative(partial_derivative(x, 2), 2);
    return r;
  };
  auto back = lap(inverse_laplacian(f));
  ScalarField mean_free = f;
  auto fs = to_spectral(f);
  for (int a = 0; a < f.dim(); ++a) fs.spec(a)[0] = 0.0;
  mean_free = to_physical(fs);
  CHECK(l2_norm(back - mean_free) < 1e-12 * std::max(1.0, l2_norm(f)));
}

TEST_CASE("sobolev norm: L2 limit, single mode weight, direct-sum oracle, monotone") {
  TorusGrid g(8);
  CounterRng rng(14);
  auto f = random_scalar(g, 1, rng);
  CHECK(sobolev_norm(f, 0.0) == Approx(l2_norm(f)).epsilon(1e-13));

  ScalarField m(g, 1, Rep::Spectral);
  m.spec(0)[g.sidx(2, 0, 0)] = 1.0;  // |k| = 2, unit coefficient (no conjugate partner stored)
  // on the kz=0 plane the stored partner (-2,0,0) is separate; set it too
  m.spec(0)[g.sidx(g.n - 2, 0, 0)] = 1.0;
  const double expect = std::sqrt(2.0) * std::pow(1.0 + 4.0, 0.4);
  CHECK(sobolev_norm(m, 0.8) == Approx(expect).epsilon(1e-13));

  // direct weighted sum over the full spectrum from the reference DFT
  const double s = 0.8;
  auto ref = naive_dft(f, 0);
  double acc = 0;
  for (int kx = 0; kx < g.n; ++kx)
    for (int ky = 0; ky < g.n; ++ky)
      for (int kz = 0; kz < g.n; ++kz) {
        const double x1 = g.xi_of(kx), x2 = g.xi_of(ky), x3 = g.xi_of(kz);
        acc += std::pow(1.0 + x1 * x1 + x2 * x2 + x3 * x3, s) *
               std::norm(ref[(static_cast<size_t>(kx) * g.n + ky) * g.n + kz]);
      }
  CHECK(sobolev_norm(f, s) == Approx(std::sqrt(acc)).epsilon(1e-13));

  CHECK(sobolev_norm(f, 1.2) > sobolev_norm(f, 0.8));
  CHECK(sobolev_norm(f, 0.8) > sobolev_norm(f, 0.3));
}

TEST_CASE("dealiased product: identity, trig identity, convolution oracle") {
  TorusGrid g(16);
  CounterRng rng(16);
  auto f = random_scalar(g, 1, rng, 3);
  ScalarField one(g, 1, Rep::Physical);
  for (size_t i = 0; i < g.points(); ++i) one.phys(0)[i] = 1.0;
  auto p = dealiased_product(f, one);
  CHECK(l2_norm(p - f) < 1e-13 * std::max(1.0, l2_norm(f)));

  ScalarField c(g, 1, Rep::Physical);
  for (int ix = 0; ix < g.n; ++ix)
    for (int iy = 0; iy < g.n; ++iy)
      for (int iz = 0; iz < g.n; ++iz) c.at(0, ix, iy, iz) = std::cos(g.spacing() * ix);
  auto cc = dealiased_product(c, c);
  double worst = 0;
  for (int ix = 0; ix < g.n; ++ix)
    worst = std::max(worst,
                     std::abs(cc.at(0, ix, 2, 3) - 0.5 * (1.0 + std::cos(2 * g.spacing() * ix))));
  CHECK(worst < 1e-13);

  // exact convolution oracle on explicit mode lists
  struct Mode {
    int k[3];
    std::complex<double> c;
  };
  auto build = [&](CounterRng& r, std::vector<Mode>& modes) {
    ScalarField out(g, 1, Rep::Spectral);
    for (int m = 0; m < 6; ++m) {
      int k1 = static_cast<int>(r.below(7)) - 3;
      int k2 = static_cast<int>(r.below(7)) - 3;
      int k3 = static_cast<int>(r.below(7)) - 3;
      std::complex<double> amp(r.normal(), r.normal());
      modes.push_back({{k1, k2, k3}, amp});
      modes.push_back({{-k1, -k2, -k3}, std::conj(amp)});
    }
    // write modes into half-spectrum storage
    for (const auto& md : modes) {
      int iz = md.k[2];
      if (iz < 0) continue;  // stored via Hermitian partner
      int ix = (md.k[0] + g.n) % g.n, iy = (md.k[1] + g.n) % g.n;
      out.spec(0)[g.sidx(ix, iy, iz)] += md.c;
    }
    // modes with k3 = 0 need their negatives folded in explicitly: both were added
    return out;
  };
  CounterRng ra(21), rb(22);
  std::vector<Mode> ma, mb;
  auto fa = build(ra, ma);
  auto fb = build(rb, mb);
  auto prod = dealiased_product(fa, fb);

  // reference: convolution sum, normalized by the basis factor L^{-3/2}
  std::map<std::array<int, 3>, std::complex<double>> conv;
  for (const auto& x : ma)
    for (const auto& y : mb) {
      std::array<int, 3> k = {x.k[0] + y.k[0], x.k[1] + y.k[1], x.k[2] + y.k[2]};
      conv[k] += x.c * y.c;
    }
  const double L32 = std::pow(g.length, 1.5);
  double worst2 = 0, scale2 = 0;
  for (const auto& [k, v] : conv) {
    if (std::abs(k[0]) >= g.n / 2 || std::abs(k[1]) >= g.n / 2 || k[2] <= -g.n / 2 || k[2] >= g.n / 2)
      continue;
    if (k[2] < 0) continue;
    int ix = (k[0] + g.n) % g.n, iy = (k[1] + g.n) % g.n;
    const auto got = prod.spec(0)[g.sidx(ix, iy, k[2])];
    worst2 = std::max(worst2, std::abs(got - v / L32));
    scale2 = std::max(scale2, std::abs(v) / L32);
  }
  CHECK(worst2 < 1e-12 * scale2);

  TorusGrid g2(8);
  ScalarField wrong(g2, 1, Rep::Physical);
  CHECK_THROWS_AS(dealiased_product(f, wrong), input_error);
}

// ---------------------------------------------------------------------------

TEST_CASE("projection kills gradients and fixes curls") {
  TorusGrid g(16);
  CounterRng rng(31);
  auto phi = random_scalar(g, 2, rng, 4);
  VectorField grad(g, 2, Rep::Physical);
  for (int i = 0; i < 3; ++i) grad[i] = partial_derivative(phi, i);
  CHECK(l2_norm(project_df(grad)) < 1e-12 * std::max(1.0, l2_norm(grad)));
  CHECK(l2_norm(project_cf(grad) - grad) < 1e-12 * std::max(1.0, l2_norm(grad)));

  auto W = random_vector(g, 2, rng, 4);
  auto A = curl(W);
  CHECK(l2_norm(project_df(A) - A) < 1e-12 * std::max(1.0, l2_norm(A)));
  CHECK(l2_norm(project_cf(A)) < 1e-12 * std::max(1.0, l2_norm(A)));
}

TEST_CASE("projection per-mode oracle, complementarity, idempotence, orthogonality") {
  TorusGrid g(8);
  CounterRng rng(33);
  auto A = random_vector(g, 1, rng);
  auto S = to_spectral(A);
  auto Pd = project_df(S), Pc = project_cf(S);

  double worst = 0, scale = 0;
  detail::for_modes(g, [&](int ix, int iy, int iz, size_t idx) {
    const double xi[3] = {g.xi_of(ix), g.xi_of(iy), g.xi_of(iz)};
    const double k2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    std::complex<double> a[3] = {S[0].spec(0)[idx], S[1].spec(0)[idx], S[2].spec(0)[idx]};
    std::complex<double> want[3];
    if (k2 == 0.0) {
      for (int i = 0; i < 3; ++i) want[i] = a[i];
    } else {
      const std::complex<double> dot = (xi[0] * a[0] + xi[1] * a[1] + xi[2] * a[2]) / k2;
      for (int i = 0; i < 3; ++i) want[i] = a[i] - xi[i] * dot;
    }
    for (int i = 0; i < 3; ++i) {
      worst = std::max(worst, std::abs(Pd[i].spec(0)[idx] - want[i]));
      scale = std::max(scale, std::abs(a[i]));
    }
  });
  CHECK(worst < 1e-13 * scale);

  auto sum = Pd + Pc;
  CHECK(l2_norm(sum - S) < 1e-12 * std::max(1.0, l2_norm(S)));
  CHECK(l2_norm(project_df(Pd) - Pd) < 1e-13 * std::max(1.0, l2_norm(Pd)));
  CHECK(l2_norm(project_cf(Pc) - Pc) < 1e-13 * std::max(1.0, l2_norm(Pc)));
  CHECK(div_residual(Pd) < 1e-12 * std::max(1.0, l2_norm(Pd)));
  CHECK(curl_residual(Pc) < 1e-12 * std::max(1.0, l2_norm(Pc)));

  // L2 orthogonality via Parseval on independent fields
  auto B = random_vector(g, 1, rng);
  auto Qc = project_cf(to_spectral(B));
  double inner = 0;
  for (int i = 0; i < 3; ++i) {
    const auto& u = Pd[i];
    const auto& v = Qc[i];
    detail::for_modes(g, [&](int ix, int iy, int iz, size_t idx) {
      inner += detail::spec_weight(g, iz) *
               (u.spec(0)[idx] * std::conj(v.spec(0)[idx])).real();
    });
  }
  CHECK(std::abs(inner) < 1e-12 * l2_norm(A) * l2_norm(B));
}

TEST_CASE("hodge potential: antiderivative, zero field, reconstruction") {
  TorusGrid g(16);
  ScalarField c(g, 1, Rep::Physical);
  for (int ix = 0; ix < g.n; ++ix)
    for (int iy = 0; iy < g.n; ++iy)
      for (int iz = 0; iz < g.n; ++iz) c.at(0, ix, iy, iz) = std::cos(g.spacing() * ix);
  VectorField gradc(g, 1, Rep::Physical);
  for (int i = 0; i < 3; ++i) gradc[i] = partial_derivative(c, i);
  auto phi = hodge_potential(gradc);
  CHECK(l2_norm(phi - c) < 1e-12 * l2_norm(c));

  VectorField z(g, 1, Rep::Physical);
  CHECK(l2_norm(hodge_potential(z)) == 0.0);

  CounterRng rng(35);
  auto Acf = project_cf(random_vector(g, 3, rng, 5));
  auto pot = hodge_potential(Acf);
  VectorField rec(g, 3, Rep::Physical);
  for (int i = 0; i < 3; ++i) rec[i] = partial_derivative(pot, i);
  CHECK(l2_norm(rec - Acf) <= 1e-11 * l2_norm(Acf));

  auto bad = random_vector(g, 1, rng, 4);  // generic field is not curl-free
  CHECK_THROWS_AS(hodge_potential(bad), input_error);
}
