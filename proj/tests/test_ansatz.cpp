#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fluxlab/ansatz.hpp"
#include "fluxlab/error.hpp"
#include "fluxlab/stationary.hpp"
#include "gen.hpp"

using namespace fluxlab;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Residual of i psi_t = -1/2 psi'' + (|psi|^2 - rho0) psi for the exact
// two-soliton solution, psi_t by a fourth-order difference in t.
double two_soliton_residual(const Grid& g, double t, double rho0, double rho_min) {
  const double h = 1e-3;
  const CVec m2 = two_soliton_exact(g, t - 2 * h, rho0, rho_min);
  const CVec m1 = two_soliton_exact(g, t - h, rho0, rho_min);
  const CVec p1 = two_soliton_exact(g, t + h, rho0, rho_min);
  const CVec p2 = two_soliton_exact(g, t + 2 * h, rho0, rho_min);
  const CVec psi = two_soliton_exact(g, t, rho0, rho_min);
  const CVec lap = laplacian(psi, g);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.n(); ++i) {
    const cplx dt = (m2[i] - 8.0 * m1[i] + 8.0 * p1[i] - p2[i]) / (12.0 * h);
    const cplx r = cplx(0, 1) * dt - (-0.5 * lap[i] + (std::norm(psi[i]) - rho0) * psi[i]);
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

}  // namespace

TEST_SUITE("ansatz") {

TEST_CASE("fa_profile values") {
  Grid g(-40, 40, 801);
  const ModelParams p{1.0, 0.1, 0.0};
  const PairField f = fa_profile(g, p);
  const std::size_t mid = g.nearest(0.0);
  CHECK(f.psi1[mid].real() == doctest::Approx(0.0));
  CHECK(f.psi1[mid].imag() == doctest::Approx(0.83666).epsilon(1e-5));
  CHECK(f.psi2[mid] == std::conj(f.psi1[mid]));
  CHECK(std::norm(f.psi1.front()) == doctest::Approx(1.1).epsilon(1e-12));
  CHECK(std::norm(f.psi1.back()) == doctest::Approx(1.1).epsilon(1e-12));
  CHECK(std::norm(f.psi1[mid]) == doctest::Approx(0.7).epsilon(1e-12));

  const PairField flipped = fa_profile(g, p, -1, -1);
  CHECK(flipped.psi1[mid].imag() == doctest::Approx(-0.83666).epsilon(1e-5));
  CHECK(flipped.psi1.back().real() < 0.0);
}

TEST_CASE("fa_profile existence domain") {
  Grid g(-10, 10, 101);
  CHECK_THROWS_AS(fa_profile(g, {1.0, 0.0, 0.0}), DomainError);
  CHECK_THROWS_AS(fa_profile(g, {1.0, -0.1, 0.0}), DomainError);
  CHECK_THROWS_AS(fa_profile(g, {1.0, 0.34, 0.0}), DomainError);
  CHECK_THROWS_AS(fa_profile(g, {1.0, 0.1, 0.0}, 2), DomainError);
}

TEST_CASE("fa_profile becomes the dark kink at k = rho0/3") {
  Grid g(-20, 20, 401);
  for (double rho0 : {0.5, 1.0, 2.0}) {
    const ModelParams p{rho0, rho0 / 3.0, 0.0};
    const PairField a = fa_profile(g, p);
    const PairField b = dark_profile(g, p);
    for (std::size_t i = 0; i < g.n(); ++i) {
      CHECK(std::abs(a.psi1[i] - b.psi1[i]) < 1e-14);
      CHECK(std::abs(a.psi2[i] - b.psi2[i]) < 1e-14);
    }
  }
}

TEST_CASE("property: FA relative winding is 2 pi") {
  gen::Rng r(17);
  Grid g(-40, 40, 801);
  for (int trial = 0; trial < 20; ++trial) {
    const ModelParams p{r.uniform(0.5, 2.0), 0.0, 0.0};
    const ModelParams q{p.rho0, r.uniform(0.05, 0.95) * p.rho0 / 3.0, 0.0};
    const int sr = r.sign(), si = r.sign();
    const Observables o = observables(fa_profile(g, q, sr, si, r.uniform(-5, 5)), q, g);
    CHECK(std::abs(o.relative_winding) == doctest::Approx(two_pi).epsilon(0.01));
    CHECK_FALSE(o.phase_undefined());
  }
  const ModelParams p{1.0, 0.1, 0.0};
  CHECK(std::abs(observables(fa_profile(g, p), p, g).relative_winding) == doctest::Approx(two_pi).epsilon(0.01));
}

TEST_CASE("dark_profile values") {
  Grid g(-40, 40, 801);
  const ModelParams p{1.0, 0.5, 0.0};
  const PairField f = dark_profile(g, p);
  CHECK(std::abs(f.psi1[g.nearest(0.0)]) < 1e-15);
  CHECK(f.psi1.back().real() == doctest::Approx(1.22474).epsilon(1e-5));
  CHECK(f.psi1 == f.psi2);
  CHECK_THROWS_AS(dark_profile(g, {1.0, -1.0, 0.0}), DomainError);
  CHECK_NOTHROW(dark_profile(g, {1.0, -0.5, 0.0}));
  const Observables o = observables(f, p, g);
  CHECK(o.relative_winding == doctest::Approx(0.0));
}

TEST_CASE("exact solutions have small discrete residuals") {
  Grid g(-40, 40, 1601);  // dx = 0.05
  for (double k : {0.05, 0.1, 0.2, 0.3}) {
    const ModelParams p{1.0, k, 0.0};
    CHECK(stationary_residual(fa_profile(g, p), p, g) < 1e-5);
  }
  for (double k : {0.0, 0.2, 0.5}) {
    const ModelParams p{1.0, k, 0.0};
    CHECK(stationary_residual(dark_profile(g, p), p, g) < 1e-5);
  }
  for (double t : {-5.0, -2.0, 0.0, 1.0, 5.0}) CHECK(two_soliton_residual(g, t, 1.0, 0.25) < 1e-5);
}

TEST_CASE("travelling_dark values") {
  Grid g(-20, 20, 4001, Stencil::five_point);
  auto min_density = [&](const CVec& psi) {
    double m = 1e9;
    for (const auto& z : psi) m = std::min(m, std::norm(z));
    return m;
  };
  CHECK(min_density(travelling_dark(g, 1.0, 0.0)) < 1e-12);
  CHECK(min_density(travelling_dark(g, 1.0, 0.5)) == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(min_density(travelling_dark(g, 2.0, 0.3)) == doctest::Approx(2.0 * 0.09).epsilon(1e-6));
  const CVec flat = travelling_dark(g, 1.0, 1.0);
  for (const auto& z : flat) CHECK(std::norm(z) == doctest::Approx(1.0));
  CHECK_THROWS_AS(travelling_dark(g, 1.0, 1.2), DomainError);
  // core position sqrt(rho0) x0
  const CVec shifted = travelling_dark(g, 4.0, 0.0, 1.5);
  CHECK(std::abs(shifted[g.nearest(3.0)]) < 1e-12);
}

TEST_CASE("two_soliton_exact values and symmetries") {
  Grid g(-30, 30, 601);
  const std::size_t mid = g.nearest(0.0);
  CHECK(std::abs(two_soliton_exact(g, 0.0, 1.0, 0.25)[mid]) < 1e-15);
  const CVec far = two_soliton_exact(g, 3.0, 1.0, 0.25);
  CHECK(std::norm(far.front()) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK_THROWS_AS(two_soliton_exact(g, 0.0, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(two_soliton_exact(g, 0.0, 1.0, 0.0), DomainError);

  gen::Rng r(23);
  for (int trial = 0; trial < 20; ++trial) {
    const double rho0 = r.uniform(0.5, 2.0), rm = r.uniform(0.01, 0.99) * rho0, t = r.uniform(-10, 10);
    const CVec a = two_soliton_exact(g, t, rho0, rm);
    const CVec b = two_soliton_exact(g, -t, rho0, rm);
    for (std::size_t i = 0; i < g.n(); ++i) {
      CHECK(std::abs(a[i] - a[g.n() - 1 - i]) < 1e-12);
      CHECK(std::norm(a[i]) == doctest::Approx(std::norm(b[i])).epsilon(1e-12));
    }
  }
  // no overflow far from the collision
  for (const auto& z : two_soliton_exact(g, 1e4, 1.0, 0.25)) CHECK(std::isfinite(std::abs(z)));
}

TEST_CASE("splice") {
  Grid g(-40, 40, 801);
  const ModelParams p{1.0, 0.1, 0.0};
  const SolitonSpec one{SolitonKind::fa, 1.5, 0.0, 1, -1};
  const SpliceResult single = splice(std::span(&one, 1), p, g);
  const PairField direct = fa_profile(g, p, 1, -1, 1.5);
  for (std::size_t i = 0; i < g.n(); ++i) CHECK(std::abs(single.field.psi1[i] - direct.psi1[i]) < 1e-14);
  CHECK_FALSE(single.overlap_warning);

  // Windings add: odd pairs keep the two FAs' windings in the same sense,
  // even pairs cancel them.
  const auto pair = fa_pair(8.0);
  const double w_odd = observables(splice(pair, p, g, Parity::odd).field, p, g).relative_winding;
  const double w_even = observables(splice(pair, p, g, Parity::even).field, p, g).relative_winding;
  CHECK(std::abs(w_odd) == doctest::Approx(2 * two_pi).epsilon(0.01));
  CHECK(std::abs(w_even) < 0.01 * two_pi);

  // Imaginary-part symmetry: odd for (+-), even for (++).
  const PairField odd = splice(pair, p, g, Parity::odd).field;
  const PairField even = splice(pair, p, g, Parity::even).field;
  for (std::size_t i = 0; i < g.n(); ++i) {
    const std::size_t j = g.n() - 1 - i;
    CHECK(std::abs(odd.psi1[i].imag() + odd.psi1[j].imag()) < 1e-12);
    CHECK(std::abs(even.psi1[i].imag() - even.psi1[j].imag()) < 1e-12);
  }

  const auto close = fa_pair(1.0);
  const SpliceResult near = splice(close, p, g);
  CHECK(near.overlap_warning);
  CHECK(near.min_separation == doctest::Approx(2.0));
}

TEST_CASE("spliced dark pair approximates the exact two-soliton solution") {
  Grid g(-40, 40, 801);
  const ModelParams p{1.0, 0.0, 0.0};
  const std::vector<SolitonSpec> specs{{SolitonKind::dark, -5.0}, {SolitonKind::dark, 5.0}};
  const PairField s = splice(specs, p, g).field;
  // A nearly black pair passing through x = +-5: the closest match in t.
  // Dips at +-x where cosh(qt)/v - 2v/cosh(qt) = cosh(px).
  const double v = 2e-4, rho_min = v * v;
  const double q = 2.0 * std::sqrt(rho_min * (1.0 - rho_min)), pk = 2.0 * std::sqrt(1.0 - rho_min);
  const double C = std::cosh(pk * 5.0);
  const double c = 0.5 * (v * C + std::sqrt(v * v * C * C + 8.0 * v * v));
  const double t = std::acosh(c) / q;
  const CVec exact = two_soliton_exact(g, t, 1.0, rho_min);
  // equal up to a global sign
  double err = 0.0;
  for (std::size_t i = 0; i < g.n(); ++i) err = std::max(err, std::abs(s.psi1[i] + exact[i]));
  CHECK(err < 1e-3);
}

TEST_CASE("trapped_guess") {
  Grid g(-32, 32, 321);
  const auto pair = fa_pair(1.0);
  const ModelParams free{1.0, 0.2, 0.0};
  const PairField a = trapped_guess(pair, free, g);
  const PairField b = splice(pair, free, g).field;
  CHECK(a.psi1 == b.psi1);

  const ModelParams p{1.0, 0.2, 0.1};
  const PairField t = trapped_guess(pair, p, g);
  for (std::size_t i = 0; i < g.n(); ++i)
    if (std::abs(g.x(i)) >= std::sqrt(2.0) / 0.1) CHECK(std::abs(t.psi1[i]) == 0.0);

  NewtonReport rep;
  const PairField s = newton_stationary(t, p, g, {}, &rep);
  CHECK(rep.residual < 1e-10);
  CHECK(imag_amplitude(s) > 0.3);
}

}  // TEST_SUITE
