#include <doctest.h>

#include <cmath>

#include "fluxlab/ansatz.hpp"
#include "fluxlab/error.hpp"
#include "fluxlab/particle.hpp"
#include "fluxlab/stationary.hpp"
#include "gen.hpp"

using namespace fluxlab;

namespace {

double max_diff(const CVec& a, const CVec& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_diff(const PairField& a, const PairField& b) {
  return std::max(max_diff(a.psi1, b.psi1), max_diff(a.psi2, b.psi2));
}

// Distance after removing the best common phase rotation of b.
double max_diff_mod_phase(const PairField& a, const PairField& b) {
  cplx ov = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) ov += std::conj(b.psi1[i]) * a.psi1[i] + std::conj(b.psi2[i]) * a.psi2[i];
  const cplx rot = ov / std::abs(ov);
  PairField r = b;
  for (auto& z : r.psi1) z *= rot;
  for (auto& z : r.psi2) z *= rot;
  return max_diff(a, r);
}

}  // namespace

TEST_SUITE("stationary") {

TEST_CASE("settings validation") {
  NewtonSettings s;
  CHECK_NOTHROW(s.validate());
  s.tol = 0.0;
  CHECK_THROWS_AS(s.validate(), DomainError);
  s = {};
  s.max_iter = 0;
  CHECK_THROWS_AS(s.validate(), DomainError);
  s = {};
  s.max_step = -1.0;
  CHECK_THROWS_AS(s.validate(), DomainError);
}

TEST_CASE("closed-form FA is a fixed point of Newton") {
  // The discrete solution differs from the closed form by the truncation
  // error, which is O(dx^4).
  Grid g(-40, 40, 3201);
  const ModelParams p{1.0, 0.1, 0.0};
  const PairField exact = fa_profile(g, p);
  NewtonReport rep;
  const PairField s = newton_stationary(exact, p, g, {}, &rep);
  CHECK(max_diff(s, exact) < 1e-8);
  CHECK(rep.residual < 1e-10);
  CHECK(rep.iterations <= 3);
}

TEST_CASE("a dark kink of the wrong width converges with quadratic rate") {
  Grid g(-20, 20, 401);
  const ModelParams p{1.0, 0.5, 0.0};
  PairField guess = dark_profile(g, p);
  const double a = p.background();
  for (std::size_t i = 0; i < g.n(); ++i) guess.psi1[i] = guess.psi2[i] = a * std::tanh(0.7 * a * g.x(i));

  NewtonReport rep;
  const PairField s = newton_stationary(guess, p, g, {}, &rep);
  CHECK(stationary_residual(s, p, g) < 1e-10);
  CHECK(max_diff(s, dark_profile(g, p)) < 1e-4);

  // Once in the basin the residual squares each step.
  bool quadratic = false;
  for (std::size_t i = 1; i + 1 < rep.history.size(); ++i) {
    const double r0 = rep.history[i - 1], r1 = rep.history[i];
    if (r0 < 1e-2 && r1 > 1e-13) {
      CHECK(r1 < 10.0 * r0 * r0);
      quadratic = true;
    }
  }
  CHECK(quadratic);
}

TEST_CASE("converged states are fixed points of the time evolution") {
  Grid g(-20, 20, 401);
  gen::Rng rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const double k = rng.uniform(0.05, 0.3);
    const ModelParams p{1.0, k, 0.0};
    const PairField s = newton_stationary(fa_profile(g, p, rng.sign(), rng.sign()), p, g);
    CHECK(max_norm(gpe_rhs(s, p, g)) < 1e-9);
  }
}

TEST_CASE("free unknowns reproduce the conjugate solution") {
  Grid g(-20, 20, 401);
  const ModelParams p{1.0, 0.2, 0.0};
  NewtonSettings free;
  free.symmetry = Symmetry::free;
  const PairField guess = fa_profile(g, p);
  const PairField a = newton_stationary(guess, p, g);
  const PairField b = newton_stationary(guess, p, g, free);
  CHECK(max_diff_mod_phase(a, b) < 1e-7);
}

TEST_CASE("non-convergence is reported with the residual") {
  Grid g(-20, 20, 201);
  const ModelParams p{1.0, 0.1, 0.0};
  NewtonSettings s;
  s.max_iter = 1;
  PairField guess = fa_profile(g, p);
  for (auto& z : guess.psi1) z *= 0.5;
  NewtonReport rep;
  CHECK_THROWS_AS(newton_stationary(guess, p, g, s, &rep), ConvergenceError);
  CHECK(rep.iterations == 1);
  CHECK(rep.residual > 0.0);
}

TEST_CASE("untrapped FA branch follows the pitchfork") {
  Grid g = Grid::with_spacing(-20, 20, 0.05);
  const ModelParams p{1.0, 0.05, 0.0};
  const BranchPoint seed = solve_point(fa_profile(g, p), 0.05, p, g);
  const Branch b = continue_in_k(seed, 0.36, 0.01, p, g, {}, 1);
  REQUIRE(b.k_ce.has_value());
  CHECK(*b.k_ce == doctest::Approx(1.0 / 3.0).epsilon(0.015));
  CHECK_FALSE(b.lost);
  for (const auto& pt : b.points) {
    if (pt.k < 1.0 / 3.0) CHECK(std::abs(pt.imag_amplitude - std::sqrt(1.0 - 3.0 * pt.k)) < 1e-4);
    CHECK(pt.residual < 1e-9);
  }
  const PitchforkFit fit = fit_pitchfork(b);
  CHECK(fit.beta == doctest::Approx(0.5).epsilon(0.2));
  CHECK(fit.k_c == doctest::Approx(1.0 / 3.0).epsilon(0.01));
}

TEST_CASE("dark branch carries no imaginary part") {
  Grid g(-20, 20, 401);
  const ModelParams p{1.0, 0.1, 0.0};
  const BranchPoint seed = solve_point(dark_profile(g, p), 0.1, p, g);
  const Branch b = continue_in_k(seed, 0.5, 0.1, p, g);
  CHECK(b.points.size() >= 5);
  for (const auto& pt : b.points) CHECK(pt.imag_amplitude < 1e-12);
}

TEST_CASE("continuation rejects bad steps") {
  Grid g(-20, 20, 201);
  const ModelParams p{1.0, 0.1, 0.0};
  const BranchPoint seed = solve_point(fa_profile(g, p), 0.1, p, g);
  CHECK_THROWS_AS(continue_in_k(seed, 0.3, 0.0, p, g), DomainError);
}

TEST_CASE("co-moving solve at zero velocity is the static FA") {
  Grid g(-20, 20, 401);
  const ModelParams p{1.0, 0.2, 0.0};
  const PairField st = newton_stationary(fa_profile(g, p), p, g);
  const PairField tr = travelling_fa(p, g, 0.0);
  CHECK(max_diff_mod_phase(st, tr) < 1e-7);
}

TEST_CASE("moving FA keeps the core at the requested position") {
  Grid g(-30, 30, 601);
  const ModelParams p{1.0, 0.2, 0.0};
  const PairField s = travelling_fa(p, g, 0.2, 3.0);
  std::size_t imin = 0;
  for (std::size_t i = 0; i < g.n(); ++i)
    if (std::norm(s.psi1[i]) < std::norm(s.psi1[imin])) imin = i;
  CHECK(std::abs(g.x(imin) - 3.0) <= 0.5 * g.dx());
  // Velocity makes the two components differ in more than conjugation.
  CHECK(max_diff(s.psi1, s.psi2) > 0.1);
}

TEST_CASE("moving FA merges into the dark soliton above the critical coupling") {
  Grid g(-40, 40, 801);
  const double v = 0.4;
  const double kc = k_critical_of_v(v);
  const PairField below = travelling_fa({1.0, kc - 0.03, 0.0}, g, v);
  CHECK(max_diff(below.psi1, below.psi2) > 0.1);
  const PairField above = travelling_fa({1.0, kc + 0.02, 0.0}, g, v);
  CHECK(max_diff(above.psi1, above.psi2) < 1e-8);
}

TEST_CASE("trapped odd pair loses its imaginary part before the untrapped limit") {
  const ModelParams p{1.0, 0.25, 0.1};
  const Grid g(-32, 32, 321);
  const auto specs = fa_pair(1.5);
  const BranchPoint seed = solve_point(trapped_guess(specs, p, g, Parity::odd), 0.25, p, g);
  CHECK(seed.imag_amplitude > 0.2);
  const Branch b = continue_in_k(seed, 0.4, 0.01, p, g, {}, 0);
  REQUIRE(b.k_ce.has_value());
  CHECK(*b.k_ce < 1.0 / 3.0);
  CHECK(*b.k_ce > 0.25);
}

}  // TEST_SUITE
