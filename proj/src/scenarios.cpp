#include "fluxlab/scenarios.hpp"

#include <algorithm>
#include <cstdio>

namespace fluxlab::scenarios {

Grid trapped_grid() { return Grid(-32.0, 32.0, 321); }

BranchPoint trapped_seed(Parity parity, double omega, const Grid& grid, const NewtonSettings& settings) {
  const double k0 = 0.25;
  const ModelParams p{1.0, k0, omega};
  // Even pairs repel through their imaginary parts and settle further apart.
  const double half = parity == Parity::even ? 2.0 : 1.5;
  return solve_point(trapped_guess(fa_pair(half), p, grid, parity), k0, p, grid, settings);
}

TrappedBranch two_way_branch(const BranchPoint& seed, const ModelParams& params, const Grid& grid, double k_lo,
                             double k_hi, double dk, const NewtonSettings& settings) {
  const ModelParams p{params.rho0, seed.k, params.omega};
  TrappedBranch out;
  if (k_lo < seed.k) {
    const Branch down = continue_in_k(seed, k_lo, dk, p, grid, settings);
    out.points.assign(down.points.rbegin(), down.points.rend());
    out.points.pop_back();
    out.lost = down.lost;
  }
  if (k_hi >= seed.k) {
    const Branch up = continue_in_k(seed, k_hi, dk, p, grid, settings);
    out.points.insert(out.points.end(), up.points.begin(), up.points.end());
    out.lost = out.lost || up.lost;
    out.k_ce = up.k_ce;
  } else {
    out.points.push_back(seed);
  }
  std::erase_if(out.points, [&](const BranchPoint& b) { return b.k < k_lo - 1e-12 || b.k > k_hi + 1e-12; });
  return out;
}

TrappedBranch trapped_branch(Parity parity, double omega, const Grid& grid, double k_lo, double k_hi, double dk,
                             const NewtonSettings& settings) {
  return two_way_branch(trapped_seed(parity, omega, grid, settings), {1.0, 0.25, omega}, grid, k_lo, k_hi, dk,
                        settings);
}

PairField trapped_state(Parity parity, double k, double omega, const Grid& grid, const NewtonSettings& settings) {
  const BranchPoint seed = trapped_seed(parity, omega, grid, settings);
  if (std::abs(k - seed.k) < 1e-12) return seed.state;
  const ModelParams p{1.0, seed.k, omega};
  return continue_in_k(seed, k, 0.01, p, grid, settings).points.back().state;
}

namespace {

SolitonSpec grey(double x0, double v) {
  SolitonSpec s;
  s.kind = SolitonKind::travelling_dark;
  s.x0 = x0;
  s.v = v;
  return s;
}

std::string velocity(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "v=%g", v);
  return buf;
}

}  // namespace

Scenario dark_pair(double k, double v, double x0, double t_end) {
  Scenario s;
  s.name = "dark pair " + velocity(v);
  s.setup = {grey(-x0, v), grey(x0, -v), Parity::odd};
  s.k = k;
  s.t_end = t_end;
  return s;
}

Scenario dark_exchange(double k, double v, double x0, double t_end) {
  Scenario s;
  s.name = "dark exchange " + velocity(v);
  s.setup = {grey(-x0, v), grey(0.0, 0.0), Parity::odd};
  s.k = k;
  s.t_end = t_end;
  return s;
}

Scenario fa_pair_collision(Parity parity, double k, double v, double x0, double t_end) {
  Scenario s;
  s.name = std::string(parity == Parity::even ? "even" : "odd") + " FA pair " + velocity(v);
  SolitonSpec l;
  l.kind = SolitonKind::fa;
  l.x0 = -x0;
  l.v = v;
  SolitonSpec r = l;
  r.x0 = x0;
  r.v = -v;
  s.setup = {l, r, parity};
  s.k = k;
  s.t_end = t_end;
  return s;
}

CollisionReport run(const Scenario& s, double noise, double record_dt) {
  const Grid g = Grid::with_spacing(-s.half_width, s.half_width, s.dx);
  const ModelParams p{1.0, s.k, 0.0};
  EvolveSettings es;
  es.t_end = s.t_end;
  es.record_dt = record_dt;
  es.noise = noise;
  return collision_experiment(s.setup, p, g, es);
}

}  // namespace fluxlab::scenarios
