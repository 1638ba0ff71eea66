#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fluxlab/core.hpp"
#include "fluxlab/error.hpp"
#include "gen.hpp"

using namespace fluxlab;

TEST_SUITE("core") {

TEST_CASE("parameter validation") {
  CHECK_NOTHROW((ModelParams{1.0, 0.2, 0.1}.validate()));
  CHECK_THROWS_AS((ModelParams{0.0, 0.2, 0.0}.validate()), DomainError);
  CHECK_THROWS_AS((ModelParams{1.0, 0.2, -0.1}.validate()), DomainError);
  CHECK_THROWS_AS((ModelParams{1.0, NAN, 0.0}.validate()), DomainError);
  CHECK_THROWS_AS((ModelParams{1.0, -1.0, 0.0}.require_dark_background()), DomainError);
  CHECK(ModelParams{1.0, 0.44, 0.0}.background() == doctest::Approx(1.2));
}

TEST_CASE("grid construction") {
  Grid g(-40, 40, 801);
  CHECK(g.dx() == doctest::Approx(0.1));
  CHECK(g.x(800) == doctest::Approx(40.0));
  CHECK_THROWS_AS(Grid(-40, 40, 5), DomainError);
  CHECK_THROWS_AS(Grid(1, -1, 100), DomainError);
  CHECK_THROWS_AS(Grid(-40, 40, 201), DomainError);  // dx = 0.4 > 0.2
  CHECK_NOTHROW(Grid(-40, 40, 201, Stencil::five_point, 0.5));

  const Grid s = Grid::with_spacing(-10, 10, 0.03);
  CHECK(s.dx() <= 0.03);
  CHECK((s.n() - 2) * 0.03 < 20.0);

  double total = 0.0;
  for (double w : g.weights()) total += w;
  CHECK(total == doctest::Approx(80.0));

  CHECK(g.mirror(-1) == 1);
  CHECK(g.mirror(-2) == 2);
  CHECK(g.mirror(801) == 799);
  CHECK(g.mirror(802) == 798);
  CHECK(g.mirror(17) == 17);
  CHECK(g.nearest(0.04) == 400);
  CHECK(g.nearest(-1e9) == 0);
  CHECK(g.nearest(1e9) == 800);
}

TEST_CASE("laplacian is exact on low-degree polynomials in the interior") {
  for (Stencil st : {Stencil::three_point, Stencil::five_point}) {
    Grid g(-3, 3, 61, st);
    CVec f(g.n());
    for (std::size_t i = 0; i < g.n(); ++i) {
      const double x = g.x(i);
      f[i] = cplx(x * x * x - 2 * x, 0.5 * x * x);
    }
    const CVec l = laplacian(f, g);
    for (std::size_t i = 2; i + 2 < g.n(); ++i) {
      CHECK(l[i].real() == doctest::Approx(6 * g.x(i)).epsilon(1e-9));
      CHECK(l[i].imag() == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("laplacian converges at the stencil order") {
  // cos(x) on [0, pi] satisfies the Neumann condition at both ends.
  for (Stencil st : {Stencil::three_point, Stencil::five_point}) {
    double prev = 0.0;
    for (int level = 0; level < 3; ++level) {
      const std::size_t n = 41u * (1u << level) - ((1u << level) - 1);
      Grid g(0, std::numbers::pi, n, st);
      CVec f(n);
      for (std::size_t i = 0; i < n; ++i) f[i] = std::cos(g.x(i));
      const CVec l = laplacian(f, g);
      double err = 0.0;
      for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(l[i] + std::cos(g.x(i))));
      if (level > 0) {
        const double rate = std::log2(prev / err);
        CHECK(rate > (st == Stencil::five_point ? 3.5 : 1.8));
      }
      prev = err;
    }
  }
}

TEST_CASE("property: laplacian preserves reflection symmetry") {
  gen::Rng r(11);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 2 * static_cast<std::size_t>(r.integer(10, 200)) + 1;
    const double L = r.uniform(2, 20);
    Grid g(-L, L, n, r.integer(0, 1) ? Stencil::five_point : Stencil::three_point, 10.0);
    CVec f = gen::smooth_field(r, g);
    for (std::size_t i = 0; i < n / 2; ++i) f[n - 1 - i] = f[i];
    const CVec l = laplacian(f, g);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(l[i] - l[n - 1 - i]) <= 1e-12 * (1 + std::abs(l[i])));
  }
}

TEST_CASE("uniform in-phase background is stationary") {
  const ModelParams p{1.0, 0.3, 0.0};
  Grid g(-10, 10, 201);
  PairField f{CVec(g.n(), p.background()), CVec(g.n(), p.background())};
  CHECK(stationary_residual(f, p, g) < 1e-13);
  CHECK(max_norm(gpe_rhs(f, p, g)) < 1e-13);
}

TEST_CASE("gpe_rhs equals -i times the stationary operator") {
  gen::Rng r(3);
  Grid g(-8, 8, 161);
  const ModelParams p{1.3, 0.2, 0.15};
  const PairField f = gen::smooth_pair(r, g);
  const PairField a = gpe_rhs(f, p, g);
  const PairField h = stationary_operator(f, p, g);
  for (std::size_t i = 0; i < g.n(); ++i) {
    CHECK(std::abs(a.psi1[i] + cplx(0, 1) * h.psi1[i]) < 1e-12);
    CHECK(std::abs(a.psi2[i] + cplx(0, 1) * h.psi2[i]) < 1e-12);
  }
  PairField out = PairField::zeros(g.n());
  gpe_rhs_into(f, trap_potential(g, p), p, g, out);
  CHECK(max_norm({CVec(out.psi1), CVec(out.psi2)}) == doctest::Approx(max_norm(a)));
}

TEST_CASE("property: norm is invariant under a global phase") {
  gen::Rng r(5);
  Grid g(-10, 10, 201);
  const ModelParams p{1.0, 0.1, 0.05};
  for (int trial = 0; trial < 25; ++trial) {
    PairField f = gen::smooth_pair(r, g);
    const double n0 = observables(f, p, g).norm;
    const double e0 = observables(f, p, g).energy;
    const cplx rot = std::polar(1.0, r.uniform(0, 2 * std::numbers::pi));
    for (auto& z : f.psi1) z *= rot;
    for (auto& z : f.psi2) z *= rot;
    CHECK(observables(f, p, g).norm == doctest::Approx(n0).epsilon(1e-13));
    CHECK(observables(f, p, g).energy == doctest::Approx(e0).epsilon(1e-11));
  }
}

TEST_CASE("property: the energy is the Hamiltonian of the stationary operator") {
  // dE/d(eps) along an interior perturbation eta equals 2 Re sum w conj(eta) H psi.
  gen::Rng r(8);
  Grid g(-6, 6, 121);
  const ModelParams p{1.0, 0.25, 0.2};
  for (int trial = 0; trial < 10; ++trial) {
    const PairField f = gen::smooth_pair(r, g);
    PairField eta = PairField::zeros(g.n());
    for (std::size_t i = 10; i + 10 < g.n(); ++i) {
      const double bump = std::exp(-g.x(i) * g.x(i));
      eta.psi1[i] = bump * cplx(r.uniform(-1, 1), r.uniform(-1, 1));
      eta.psi2[i] = bump * cplx(r.uniform(-1, 1), r.uniform(-1, 1));
    }
    auto shifted = [&](double eps) {
      PairField s = f;
      for (std::size_t i = 0; i < g.n(); ++i) {
        s.psi1[i] += eps * eta.psi1[i];
        s.psi2[i] += eps * eta.psi2[i];
      }
      return observables(s, p, g).energy;
    };
    const double h = 1e-5;
    const double fd = (shifted(h) - shifted(-h)) / (2 * h);
    const PairField H = stationary_operator(f, p, g);
    const RVec w = g.weights();
    double exact = 0.0;
    for (std::size_t i = 0; i < g.n(); ++i)
      exact += 2 * w[i] * (std::conj(eta.psi1[i]) * H.psi1[i] + std::conj(eta.psi2[i]) * H.psi2[i]).real();
    CHECK(fd == doctest::Approx(exact).epsilon(1e-6));
  }
}

TEST_CASE("phase winding") {
  Grid g(-10, 10, 401);
  CVec f(g.n());
  for (std::size_t i = 0; i < g.n(); ++i) f[i] = std::polar(1.0, 0.5 * std::numbers::pi * std::tanh(g.x(i)));
  CHECK(phase_winding(f) == doctest::Approx(std::numbers::pi).epsilon(1e-6));

  CVec z(g.n(), cplx(1.0));
  z[200] = 0.0;
  std::size_t skipped = 0;
  CHECK(phase_winding(z, &skipped) == doctest::Approx(0.0));
  CHECK(skipped == 1);
}

TEST_CASE("field validation") {
  Grid g(-4, 4, 41);
  PairField f = PairField::zeros(g.n());
  CHECK_NOTHROW(f.validate(g));
  f.psi2.pop_back();
  CHECK_THROWS_AS(f.validate(g), DomainError);
  f = PairField::zeros(g.n());
  f.psi1[3] = cplx(NAN, 0);
  CHECK_THROWS_AS(f.validate(g), DomainError);
}

}  // TEST_SUITE
