#pragma once

// Time evolution by the method of lines (classical RK4 in time) and tracking
// of density minima ("dips") across recorded frames.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fluxlab/ansatz.hpp"
#include "fluxlab/core.hpp"

namespace fluxlab {

struct EvolveSettings {
  double t_end = 100.0;
  /// dt = cfl * dx^2 unless dt > 0 is given.
  double cfl = 0.1;
  double dt = 0.0;
  /// Steps between recorded frames; 0 picks the stride closest to record_dt.
  int record_every = 0;
  double record_dt = 0.25;
  /// Complex Gaussian noise of this amplitude is added to both components
  /// before the first step (0 disables it).
  double noise = 0.0;
  std::uint64_t seed = 20240101;
  /// Relative norm/energy drift above which a run is flagged.
  double drift_tol = 1e-6;

  void validate() const;
  double step(const Grid& grid) const { return dt > 0.0 ? dt : cfl * grid.dx() * grid.dx(); }
  int stride(const Grid& grid) const;
};

struct EvolveResult {
  std::vector<double> times;
  std::vector<PairField> frames;
  double dt = 0.0;
  double norm_drift = 0.0;    ///< max relative deviation over the recorded frames
  double energy_drift = 0.0;
  bool drift_flag = false;
  /// Density at an end point moved by more than 1e-3 of the background.
  bool boundary_flag = false;
  bool aborted = false;
  std::string diagnostic;
};

/// Classical fourth-order Runge-Kutta integration of gpe_rhs. A non-finite or
/// exploding state stops the run; the last good frame is kept and `aborted`
/// is set.
EvolveResult evolve(const PairField& initial, const ModelParams& params, const Grid& grid,
                    const EvolveSettings& settings);

/// One RK4 step in place; `trap` is trap_potential(grid, params).
void rk4_step(PairField& state, double dt, std::span<const double> trap, const ModelParams& params,
              const Grid& grid);

/// Add complex Gaussian noise of the given amplitude (deterministic in seed).
void add_noise(PairField& state, double amplitude, std::uint64_t seed);

struct Dip {
  double x = 0.0;
  double depth = 0.0;       ///< refined density at the minimum
  double prominence = 0.0;  ///< height of the lower of the two enclosing maxima above the minimum
};

/// Interior local minima of `density` whose prominence is at least
/// min_prominence, refined by a three-point parabola, sorted by x.
std::vector<Dip> find_dips(std::span<const double> density, const Grid& grid, double min_prominence);

struct TopologyEvent {
  enum class Kind { merge, split };
  Kind kind;
  double t;
  std::size_t count;  ///< number of dips detected after the change
};

struct DipTrack {
  std::vector<double> times;
  /// positions[f][d]: dip d at frame f, NaN while association is suspended.
  std::vector<std::vector<double>> positions;
  std::vector<std::vector<double>> depths;
  /// Number of significant minima detected in each frame.
  std::vector<std::size_t> counts;
  std::vector<TopologyEvent> events;
  std::size_t n_dips = 0;

  /// Separation of dips 0 and 1 at frame f (NaN if either is missing).
  double separation(std::size_t f) const;
};

struct TrackSettings {
  int component = 1;
  /// Prominence threshold relative to the frame's maximum density.
  double min_prominence = 0.02;
  /// Largest admissible jump per frame, in grid spacings.
  double max_jump = 5.0;
};

/// Track the n_dips deepest significant minima of |psi|^2 through a series.
DipTrack track_dips(const std::vector<double>& times, const std::vector<PairField>& frames, const Grid& grid,
                    std::size_t n_dips, const TrackSettings& settings = {});

/// Least-squares slope of a dip's position against time over [t0, t1].
double dip_velocity(const DipTrack& track, std::size_t dip, double t0, double t1);

// ---------------------------------------------------------------- collisions

enum class Outcome { repel, transmit, energy_exchange, breather, break_up, indeterminate };
const char* outcome_name(Outcome o);

struct CollisionReport {
  DipTrack track;
  EvolveResult run;
  Outcome outcome = Outcome::indeterminate;
  bool merged = false;            ///< dip count dropped below two at some frame
  bool crossed = false;
  bool reversed = false;          ///< both dips reversed their direction
  bool break_up = false;
  double break_up_time = 0.0;
  double min_separation = 0.0;
  double t_collision = 0.0;
  int oscillations = 0;           ///< separation maxima after the collision
  double x_collision = 0.0;
  /// Lowest density within a few healing lengths of the collision point, per
  /// frame after the collision (needs the recorded frames).
  std::vector<double> core_depth;
  int core_cycles = 0;            ///< deep pulses of core_depth
  std::vector<double> v_in;       ///< velocities before the collision, by position order
  std::vector<double> v_out;      ///< velocities after the collision, by position order
  std::vector<std::string> notes;
};

struct CollisionSetup {
  SolitonSpec left;
  SolitonSpec right;
  Parity parity = Parity::odd;
};

/// Initial data for two solitons: closed forms for dark solitons, Newton
/// solutions in the co-moving frame for moving FAs.
PairField collision_initial_state(const CollisionSetup& setup, const ModelParams& params, const Grid& grid);

/// Classify a dip track; exposed separately so that it can be tested on
/// synthetic tracks. `healing` is the core width 1/sqrt(rho0 + k). With a grid
/// and recorded frames in report.run, a pulsating dip left at the collision
/// point is also detected.
void classify_collision(CollisionReport& report, double dx, double healing, double rho_scale,
                        const Grid* grid = nullptr);

CollisionReport collision_experiment(const CollisionSetup& setup, const ModelParams& params, const Grid& grid,
                                     const EvolveSettings& settings);

/// Time at which a track departs from its initial configuration: a depth
/// change above depth_tol or a separation change above sep_tol.
std::optional<double> departure_time(const DipTrack& track, double depth_tol, double sep_tol);

}  // namespace fluxlab
