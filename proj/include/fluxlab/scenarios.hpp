#pragma once

// Ready-made setups shared by the command line tool and the acceptance runs:
// the trapped two-FA branches and the collision scenarios.

#include <string>
#include <vector>

#include "fluxlab/ansatz.hpp"
#include "fluxlab/dynamics.hpp"
#include "fluxlab/stationary.hpp"

namespace fluxlab::scenarios {

/// Noise amplitudes that seed instabilities. Break-up times depend on them
/// logarithmically; these reproduce the reported times (see README).
inline constexpr double collision_noise = 1e-12;
inline constexpr double stationary_noise = 1e-6;

/// [-32, 32] with dx = 0.2: the Thomas-Fermi cloud for Omega = 0.1 ends at 14.1.
Grid trapped_grid();

/// Newton solution of the two-FA state at k = 0.25 from a Thomas-Fermi
/// weighted splice; the seed from which trapped branches are continued.
BranchPoint trapped_seed(Parity parity, double omega, const Grid& grid, const NewtonSettings& settings = {});

struct TrappedBranch {
  std::vector<BranchPoint> points;  ///< ascending in k
  std::optional<double> k_ce;
  bool lost = false;
};

/// The branch on [k_lo, k_hi] (steps of dk) continued both ways from a solved
/// point; params supplies rho0 and Omega.
TrappedBranch two_way_branch(const BranchPoint& seed, const ModelParams& params, const Grid& grid, double k_lo,
                             double k_hi, double dk, const NewtonSettings& settings = {});

/// two_way_branch from trapped_seed.
TrappedBranch trapped_branch(Parity parity, double omega, const Grid& grid, double k_lo, double k_hi,
                             double dk = 0.01, const NewtonSettings& settings = {});

/// The two-FA state at a single k.
PairField trapped_state(Parity parity, double k, double omega, const Grid& grid,
                        const NewtonSettings& settings = {});

struct Scenario {
  std::string name;
  CollisionSetup setup;
  double k = 0.0;
  double half_width = 60.0;
  double dx = 0.1;
  double t_end = 100.0;
};

/// Grey solitons at -x0 and x0 moving towards each other with speed v.
Scenario dark_pair(double k, double v, double x0, double t_end);
/// A grey soliton with velocity v from -x0 hitting a static one at the origin.
Scenario dark_exchange(double k, double v, double x0, double t_end);
/// Two FAs at -+x0 moving towards each other with speed v.
Scenario fa_pair_collision(Parity parity, double k, double v, double x0, double t_end);

CollisionReport run(const Scenario& s, double noise = collision_noise, double record_dt = 0.1);

}  // namespace fluxlab::scenarios
