#pragma once

// Linear (Bogoliubov-de Gennes) stability of stationary states.
//
// Perturbations psi_j = psi0_j + eps [a_j e^{i lambda t} + conj(b_j) e^{-i conj(lambda) t}]
// give an eigenproblem for lambda; the state is unstable iff some Im lambda != 0.
// Internally the problem is solved in the equivalent real form for the real
// and imaginary parts of the perturbation, whose eigenvalues are mu = i lambda.

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "fluxlab/core.hpp"
#include "fluxlab/stationary.hpp"

namespace fluxlab {

struct BdgOperator {
  Grid grid;
  ModelParams params;
  PairField state;
  /// 4n x 4n real generator acting on (Re d1, Im d1, Re d2, Im d2), block layout.
  Eigen::MatrixXd real;

  std::size_t n() const { return grid.n(); }
  /// The 4n x 4n complex BdG matrix acting on (a1, a2, b1, b2).
  Eigen::MatrixXcd complex_matrix() const;
};

/// Throws DomainError when the stationary residual exceeds 100 tol.
BdgOperator assemble_bdg(const PairField& state, const ModelParams& params, const Grid& grid,
                         double tol = 1e-10);

struct SpectrumOptions {
  /// Stability threshold on |Im lambda| relative to rho0.
  double threshold = 1e-6;
  bool want_modes = false;
  /// Remove the phase zero mode (and, without a trap, the translation mode)
  /// from the verdict.
  bool exclude_gauge = true;
};

struct Mode {
  CVec a1, a2, b1, b2;
};

struct Spectrum {
  std::vector<cplx> eigenvalues;
  /// Filled only with want_modes, parallel to eigenvalues.
  std::vector<Mode> modes;
  /// Indices excluded from the verdict as neutral phase or translation modes.
  std::vector<std::size_t> excluded;
  double max_im = 0.0;
  cplx max_unstable = 0.0;
  bool stable = true;
  /// Largest distance from -lambda to the nearest eigenvalue.
  double symmetry_error = 0.0;
  double operator_norm = 0.0;
  bool symmetry_violation = false;
};

Spectrum eig_spectrum(const BdgOperator& op, const SpectrumOptions& options = {});

struct SweepRow {
  double k = 0.0;
  double max_im = 0.0;
  double re_of_max = 0.0;
  bool stable = true;
};

struct Window {
  double k_from = 0.0;
  double k_to = 0.0;
  bool stable = false;
};

struct StabilitySweep {
  std::vector<SweepRow> rows;
  /// First k at which the branch turns stable after being unstable; the first
  /// k when no row is unstable.
  std::optional<double> k_cs;
  /// Maximal runs of consecutive rows with the same verdict.
  std::vector<Window> windows;
};

StabilitySweep stability_sweep(const std::vector<BranchPoint>& branch, const ModelParams& params,
                               const Grid& grid, const SpectrumOptions& options = {},
                               double tol = 1e-10);

/// Derives k_cs and windows from precomputed rows (sorted by k ascending).
void summarize_sweep(StabilitySweep& sweep);

}  // namespace fluxlab
