#pragma once

// Newton-Raphson solver for stationary and co-moving solutions, and natural
// parameter continuation in the coupling k.

#include <optional>
#include <string>
#include <vector>

#include "fluxlab/core.hpp"

namespace fluxlab {

enum class Symmetry {
  conjugate,  ///< psi2 = conj(psi1); unknowns Re psi1, Im psi1
  free,       ///< all four real fields
};

struct NewtonSettings {
  double tol = 1e-10;
  int max_iter = 50;
  Symmetry symmetry = Symmetry::conjugate;
  /// Updates are scaled down so that their max-norm does not exceed this.
  double max_step = 0.2;

  void validate() const;
};

struct NewtonReport {
  int iterations = 0;
  double residual = 0.0;
  /// Smallest reciprocal condition estimate of the Jacobians seen.
  double min_rcond = 1.0;
  /// Full residual before each update and after the last one.
  std::vector<double> history;
};

/// Solve H psi = 0 starting from `guess`. Global-phase and, without a trap,
/// translation zero modes are removed by pinning one unknown each.
/// Throws ConvergenceError or SingularMatrixError.
PairField newton_stationary(const PairField& guess, const ModelParams& params, const Grid& grid,
                            const NewtonSettings& settings = {}, NewtonReport* report = nullptr);

/// Solve -1/2 psi'' + i v psi' + (|psi|^2 - rho0) psi - k psi_other = 0 in the
/// frame moving with velocity v (always in the free unknowns, no trap).
/// Throws NumericalError when the solution collapses to the flat background.
PairField newton_travelling(const PairField& guess, double v, const ModelParams& params,
                            const Grid& grid, const NewtonSettings& settings = {},
                            NewtonReport* report = nullptr);

/// Travelling FA with velocity v and core at x0, reached from the static
/// closed form by continuation in v with steps of at most dv.
PairField travelling_fa(const ModelParams& params, const Grid& grid, double v, double x0 = 0.0,
                        int sign_re = 1, int sign_im = 1, const NewtonSettings& settings = {},
                        double dv = 0.05);

/// Imaginary amplitude max |Im psi1|.
double imag_amplitude(const PairField& state);

struct BranchPoint {
  double k = 0.0;
  PairField state;
  double imag_amplitude = 0.0;
  double residual = 0.0;
};

struct Branch {
  std::vector<BranchPoint> points;
  /// First k at which the imaginary amplitude falls below the threshold.
  std::optional<double> k_ce;
  bool lost = false;
  std::string diagnostic;
};

inline constexpr double k_ce_threshold = 1e-4;

/// Solve at params with k = k and wrap the result as a branch point.
BranchPoint solve_point(const PairField& guess, double k, const ModelParams& params, const Grid& grid,
                        const NewtonSettings& settings = {});

/// March from seed.k towards k_end in steps of dk, each solve starting from
/// the previous solution. A failed step is retried with dk/2; two failures in a
/// row end the run with `lost` set. Stops early `extra_after_ce` points after
/// k_ce has been detected (negative: never).
Branch continue_in_k(const BranchPoint& seed, double k_end, double dk, const ModelParams& params,
                     const Grid& grid, const NewtonSettings& settings = {}, int extra_after_ce = -1);

struct PitchforkFit {
  double k_c = 0.0;
  double beta = 0.0;
  double prefactor = 0.0;
};

/// Fit imag_amplitude = C (k_c - k)^beta to the last `window` points of the
/// branch that still carry an imaginary part.
PitchforkFit fit_pitchfork(const Branch& branch, std::size_t window = 8);

}  // namespace fluxlab
