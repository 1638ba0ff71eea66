#pragma once

// CSV and manifest output. Numbers are printed with a fixed format so that
// identical inputs give byte-identical files.

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "fluxlab/core.hpp"
#include "fluxlab/dynamics.hpp"
#include "fluxlab/particle.hpp"
#include "fluxlab/spectrum.hpp"
#include "fluxlab/stationary.hpp"

namespace fluxlab::io {

std::string num(double v);

void write_field(std::ostream& os, const Grid& grid, const PairField& f);
/// Reads the x, re_psi1, im_psi1, re_psi2, im_psi2 format; returns the x column in *xs.
PairField read_field(std::istream& is, std::vector<double>* xs = nullptr);

void write_branch(std::ostream& os, const Branch& b);
void write_spectrum(std::ostream& os, const Spectrum& s);
void write_sweep(std::ostream& os, const StabilitySweep& s);
/// Long format t, x, |psi1|^2, |psi2|^2, every x_stride-th grid point.
void write_density_series(std::ostream& os, const Grid& grid, const std::vector<double>& times,
                          const std::vector<PairField>& frames, std::size_t x_stride = 1);
void write_diptrack(std::ostream& os, const DipTrack& tr);
void write_trajectory(std::ostream& os, const ParticleTrajectory& tr);

struct FrequencyRow {
  double k;
  double omega_in;
  double omega_out;
  double bdg_max_im;  ///< NaN when not paired with a spectrum
};
void write_frequencies(std::ostream& os, const std::vector<FrequencyRow>& rows);

/// Plain-text manifest: command, every config key, grid and build information.
void write_manifest(std::ostream& os, const std::string& command, const std::map<std::string, std::string>& config,
                    const std::vector<std::string>& outputs);

/// Create the parent directories of path.
void ensure_parent(const std::string& path);

}  // namespace fluxlab::io
