#pragma once

// Reduced particle description of interacting dark solitons and of trapped
// FA pairs: closed-form dip trajectories, the velocity-dependent pair
// potential, the n-soliton Euler-Lagrange dynamics and the small-oscillation
// frequencies about the trapped two-FA fixed point.

#include <vector>

#include <Eigen/Dense>

namespace fluxlab {

/// rho0 v^2, the density at the core of a soliton with velocity parameter v.
double min_density(double rho0, double v);

/// Closest approach 2 x0* = (2/p) arccosh(1/v - 2v) of a symmetric pair,
/// p = 2 sqrt(rho0 - rho0 v^2). Requires 0 < v < 1/2.
double min_separation(double rho0, double v);

enum class DipApprox {
  exact,           ///< x = arccosh(cosh(qt)/v - 2v/cosh(qt)) / p
  well_separated,  ///< x = arccosh(cosh(qt)/v) / p
};

/// Position of the right dip of the symmetric pair at time t (closest at t=0).
double dip_trajectory(double t, double rho0, double v, DipApprox approx);

/// W(x0) = rho0 A^2 / (2 sinh^2(2 sqrt(rho0) A x0)), x0 the half separation.
double pair_potential(double x0, double A, double rho0);
/// dW/dx0.
double pair_potential_slope(double x0, double A, double rho0);

enum class DepthModel {
  velocity_dependent,  ///< A_i = sqrt(1 - xdot_i^2 / rho0) at every instant
  frozen,              ///< A_i fixed at their initial values
};

struct ParticleState {
  std::vector<double> x;
  std::vector<double> v;
  /// Depths used by DepthModel::frozen; filled by make().
  std::vector<double> A;

  static ParticleState make(std::vector<double> x, std::vector<double> v, double rho0 = 1.0);
  std::size_t size() const { return x.size(); }
  void validate(double rho0) const;
};

/// Accelerations from the Euler-Lagrange equations of L = sum xdot^2/2 - V,
/// V = sum_i sum_{j != i} rho0 A_ij^2 / (2 sinh^2(sqrt(rho0) A_ij (x_i - x_j))),
/// A_ij = (A_i + A_j)/2. Solves (I - V_vv) a = -V_x + V_vx v.
std::vector<double> n_body_accelerations(const ParticleState& s, double rho0,
                                         DepthModel model = DepthModel::velocity_dependent);

/// Interaction energy V of the state (depths per the model).
double particle_potential(const ParticleState& s, double rho0, DepthModel model);

struct ParticleTrajectory {
  std::vector<double> t;
  std::vector<ParticleState> states;
};

/// RK4 integration with step dt, recording every `record_every` steps.
ParticleTrajectory integrate_particles(const ParticleState& initial, double rho0, double t_end,
                                       DepthModel model = DepthModel::velocity_dependent, double dt = 1e-3,
                                       int record_every = 100);

/// Core acceleration of one FA in the trap: (1 - 5k) Omega^2 x0 / (1 + k).
double fa_effective_accel(double x0, double k, double omega);

/// A frequency that may be imaginary: |radicand|^(1/2) with a flag for a
/// negative radicand (then `value` is a growth rate).
struct Frequency {
  double value = 0.0;
  bool imaginary = false;
};

/// sqrt((5k - 1)/(1 + k)) Omega, the single-FA trap frequency from the core equation.
Frequency eq10_frequency(double k, double omega);
/// sqrt(2 (5k - 1)/(k + 1)) Omega, the in-phase pair frequency.
Frequency eq26_frequency(double k, double omega);

/// Critical coupling for FAs moving with velocity v.
double k_critical_of_v(double v);

/// 8 rho0^(3/2) e^(4 sqrt(rho0) x) - 2 ((1 - 5k)/(1 + k)) Omega^2 x.
double fixed_point_residual(double x, double k, double rho0, double omega);
/// Root x < 0 of fixed_point_residual by bisection on [-50, -1e-3]. Requires k > 1/5.
double fa_fixed_point(double k, double rho0, double omega);

struct FaFrequencies {
  Frequency in_phase;
  Frequency out_of_phase;
};

FaFrequencies fa_frequencies(double k, double rho0, double omega, double x_tilde);

/// The 2x2 matrix of the linearized pair equations; its eigenvalues are -omega^2.
Eigen::Matrix2d fa_linearization(double k, double rho0, double omega, double x_tilde);

}  // namespace fluxlab
