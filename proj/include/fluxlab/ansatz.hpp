#pragma once

// Closed-form solutions of the coupled model and initial-condition builders.

#include <span>
#include <vector>

#include "fluxlab/core.hpp"

namespace fluxlab {

enum class SolitonKind { fa, dark, travelling_dark };

struct SolitonSpec {
  SolitonKind kind = SolitonKind::dark;
  double x0 = 0.0;   ///< core position
  double v = 0.0;    ///< velocity in units of the sound speed, |v| < 1
  int sign_re = 1;   ///< sign of the tanh term
  int sign_im = 1;   ///< sign of the sech term (FA only)

  void validate(const ModelParams& params) const;
};

/// Symmetry of the imaginary part of a two-FA state: odd is the (+-)
/// configuration, even the (++) one.
enum class Parity { odd, even };

/// psi1 = psi, psi2 = conj(psi) with
///   psi = s_re sqrt(rho0+k) tanh(2 sqrt(k) (x-x0)) + i s_im sqrt(rho0-3k) sech(...).
/// Requires 0 < k <= rho0/3; at k = rho0/3 it is the dark kink.
PairField fa_profile(const Grid& grid, const ModelParams& params, int sign_re = 1,
                     int sign_im = 1, double x0 = 0.0);

/// psi1 = psi2 = sign sqrt(rho0+k) tanh(sqrt(rho0+k) (x-x0)). Requires k > -rho0.
PairField dark_profile(const Grid& grid, const ModelParams& params, double x0 = 0.0,
                       int sign = 1);

/// Grey soliton sqrt(rho0) [A tanh(sqrt(rho0) A (x - sqrt(rho0) x0)) + i v],
/// A = sqrt(1 - v^2); the core sits at sqrt(rho0) x0. |v| = 1 gives the flat
/// background.
CVec travelling_dark(const Grid& grid, double rho0, double v, double x0 = 0.0);

/// The exact symmetric two-dark-soliton solution of the single NLS at time t.
CVec two_soliton_exact(const Grid& grid, double t, double rho0, double rho_min);

struct SpliceResult {
  PairField field;
  /// Set when two cores are closer than 5 healing lengths.
  bool overlap_warning = false;
  double min_separation = 0.0;
};

/// Normalized product of the closed-form constituents, in the order given.
/// For Parity::even every second FA has its two components exchanged; the
/// odd configuration connects psi1 to psi1 throughout. Moving FAs have no
/// closed form: build them numerically and use splice_fields.
SpliceResult splice(std::span<const SolitonSpec> specs, const ModelParams& params,
                    const Grid& grid, Parity parity = Parity::odd);

struct Constituent {
  PairField field;
  double x0 = 0.0;
  bool is_fa = true;
};

/// The closed-form constituent described by a spec (validated).
Constituent constituent(const SolitonSpec& spec, const ModelParams& params, const Grid& grid);

/// As splice, from constituents already sampled on the grid.
SpliceResult splice_fields(std::span<const Constituent> parts, const ModelParams& params,
                           const Grid& grid, Parity parity = Parity::odd);

/// Thomas-Fermi envelope sqrt(max(rho0 - V, 0) / rho0).
RVec thomas_fermi_envelope(const Grid& grid, const ModelParams& params);

/// splice output multiplied by the Thomas-Fermi envelope.
PairField trapped_guess(std::span<const SolitonSpec> specs, const ModelParams& params,
                        const Grid& grid, Parity parity = Parity::odd);

/// A static pair of FAs at -+half_separation, the usual seed for trapped solves.
std::vector<SolitonSpec> fa_pair(double half_separation);

}  // namespace fluxlab
