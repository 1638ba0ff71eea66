#include <algorithm>
#include <cmath>
#include <limits>

#include "fluxlab/dynamics.hpp"
#include "fluxlab/error.hpp"
#include "fluxlab/stationary.hpp"

namespace fluxlab {

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::repel: return "repel";
    case Outcome::transmit: return "transmit";
    case Outcome::energy_exchange: return "energy-exchange";
    case Outcome::breather: return "breather";
    case Outcome::break_up: return "break-up";
    case Outcome::indeterminate: return "indeterminate";
  }
  return "?";
}

PairField collision_initial_state(const CollisionSetup& setup, const ModelParams& params, const Grid& grid) {
  std::vector<Constituent> parts;
  for (const SolitonSpec* s : {&setup.left, &setup.right}) {
    if (s->kind == SolitonKind::fa && s->v != 0.0) {
      parts.push_back({travelling_fa(params, grid, s->v, s->x0, s->sign_re, s->sign_im), s->x0, true});
    } else {
      parts.push_back(constituent(*s, params, grid));
    }
  }
  return splice_fields(parts, params, grid, setup.parity).field;
}

namespace {

bool finite(double x) { return std::isfinite(x); }

// Number of down-up cycles of a series with hysteresis h.
int count_cycles(const std::vector<double>& s, double h) {
  int cycles = 0;
  bool have = false, falling = true;
  double ext = 0.0;
  for (double v : s) {
    if (!finite(v)) continue;
    if (!have) {
      ext = v;
      have = true;
      continue;
    }
    if (falling) {
      if (v < ext) ext = v;
      else if (v > ext + h) {
        falling = false;
        ext = v;
        ++cycles;
      }
    } else {
      if (v > ext) ext = v;
      else if (v < ext - h) {
        falling = true;
        ext = v;
      }
    }
  }
  return cycles;
}

}  // namespace

void classify_collision(CollisionReport& r, double dx, double healing, double rho_scale, const Grid* grid) {
  const DipTrack& tr = r.track;
  r.notes.clear();
  if (tr.n_dips != 2 || tr.times.size() < 4) {
    r.outcome = Outcome::indeterminate;
    r.notes.push_back("needs a two-dip track with at least four frames");
    return;
  }
  const std::size_t nf = tr.times.size();
  const double t0 = tr.times.front(), t_end = tr.times.back();

  // Collision instant: the first merged interval, else the closest approach.
  r.merged = false;
  std::size_t f_merge = nf, f_split = nf;
  for (const auto& e : tr.events) {
    if (e.kind == TopologyEvent::Kind::merge && !r.merged) {
      r.merged = true;
      f_merge = static_cast<std::size_t>(std::lower_bound(tr.times.begin(), tr.times.end(), e.t) - tr.times.begin());
    } else if (e.kind == TopologyEvent::Kind::split && r.merged && f_split == nf) {
      f_split = static_cast<std::size_t>(std::lower_bound(tr.times.begin(), tr.times.end(), e.t) - tr.times.begin());
    }
  }
  r.min_separation = std::numeric_limits<double>::infinity();
  std::size_t f_min = 0;
  for (std::size_t f = 0; f < nf; ++f) {
    const double s = tr.separation(f);
    if (finite(s) && s < r.min_separation) {
      r.min_separation = s;
      f_min = f;
    }
    if (finite(s) && s < 0.0) r.crossed = true;
  }
  std::size_t f_at = f_min;
  if (r.merged) {
    r.min_separation = 0.0;
    const std::size_t f_end = f_split < nf ? f_split : f_merge;
    r.t_collision = 0.5 * (tr.times[f_merge] + tr.times[f_end]);
    f_at = f_merge > 0 ? f_merge - 1 : 0;
  } else {
    r.t_collision = tr.times[f_min];
  }
  r.x_collision = 0.5 * (tr.positions[f_at][0] + tr.positions[f_at][1]);
  if (!finite(r.x_collision)) r.x_collision = 0.0;

  r.core_depth.clear();
  r.core_cycles = 0;
  if (grid && r.run.frames.size() == nf) {
    const double reach = 3.0 * healing;
    const std::size_t lo = grid->nearest(r.x_collision - reach), hi = grid->nearest(r.x_collision + reach);
    for (std::size_t f = 0; f < nf; ++f) {
      if (tr.times[f] <= r.t_collision) continue;
      double m = std::numeric_limits<double>::infinity();
      for (std::size_t i = lo; i <= hi; ++i) m = std::min(m, std::norm(r.run.frames[f].psi1[i]));
      r.core_depth.push_back(m);
    }
    r.core_cycles = count_cycles(r.core_depth, 0.2 * rho_scale);
  }

  // Break-up: a dip depth leaves its initial value away from the collision.
  r.break_up = false;
  {
    std::vector<double> d0 = tr.depths.front();
    std::sort(d0.begin(), d0.end());
    const double near = std::max(3.0 * r.min_separation, r.min_separation + 4.0 * healing);
    for (std::size_t f = 0; f < nf && !r.break_up; ++f) {
      const double s = tr.separation(f);
      if (!finite(s) || s < near) continue;
      std::vector<double> d = tr.depths[f];
      std::sort(d.begin(), d.end());
      for (std::size_t i = 0; i < d.size(); ++i)
        if (std::abs(d[i] - d0[i]) > 0.1 * rho_scale) {
          r.break_up = true;
          r.break_up_time = tr.times[f];
          break;
        }
    }
  }

  // The collision itself is judged before any later break-up.
  const double t_out = r.break_up && r.break_up_time > r.t_collision ? r.break_up_time : t_end;
  const double pre = r.t_collision - t0, post = t_out - r.t_collision;
  r.v_in = {dip_velocity(tr, 0, t0, t0 + 0.3 * pre), dip_velocity(tr, 1, t0, t0 + 0.3 * pre)};
  r.v_out = {dip_velocity(tr, 0, t_out - 0.3 * post, t_out), dip_velocity(tr, 1, t_out - 0.3 * post, t_out)};
  const double vmax = std::max(std::abs(r.v_in[0]), std::abs(r.v_in[1]));
  const bool have_v = finite(r.v_in[0]) && finite(r.v_in[1]) && finite(r.v_out[0]) && finite(r.v_out[1]) && vmax > 0;

  r.reversed = have_v && r.v_in[0] * r.v_out[0] < 0 && r.v_in[1] * r.v_out[1] < 0 &&
               std::min(std::abs(r.v_out[0]), std::abs(r.v_out[1])) > 0.2 * vmax;

  // Separation oscillations after the collision; merged frames count as zero.
  std::vector<double> sep_after;
  for (std::size_t f = 0; f < nf; ++f) {
    if (tr.times[f] <= r.t_collision || tr.times[f] > t_out) continue;
    const double s = tr.separation(f);
    sep_after.push_back(finite(s) ? s : (tr.counts[f] < 2 ? 0.0 : s));
  }
  r.oscillations = count_cycles(sep_after, 2.0 * dx);
  // Bound: averaged over everything after the collision, the dips do not
  // move apart.
  const double v_rel = dip_velocity(tr, 1, r.t_collision, t_out) - dip_velocity(tr, 0, r.t_collision, t_out);
  const bool bound = have_v && finite(v_rel) && std::abs(v_rel) < 0.25 * vmax;

  const bool asymmetric = have_v && std::min(std::abs(r.v_in[0]), std::abs(r.v_in[1])) < 0.5 * vmax;
  r.outcome = Outcome::indeterminate;
  if (asymmetric) {
    const std::size_t fast = std::abs(r.v_in[0]) > std::abs(r.v_in[1]) ? 0 : 1;
    const std::size_t slow = 1 - fast;
    if (std::abs(r.v_out[fast]) < 0.5 * vmax && std::abs(r.v_out[slow]) > 0.5 * vmax)
      r.outcome = Outcome::energy_exchange;
  }
  if (r.outcome == Outcome::indeterminate) {
    if ((r.oscillations >= 3 && (bound || !have_v)) || r.core_cycles >= 3)
      r.outcome = Outcome::breather;
    else if (r.merged || r.crossed)
      r.outcome = Outcome::transmit;
    else if (r.min_separation >= 2.0 * dx && r.reversed)
      r.outcome = Outcome::repel;
  }
  if (r.outcome == Outcome::indeterminate && r.break_up) r.outcome = Outcome::break_up;
  if (r.break_up) r.notes.push_back("break-up at t=" + std::to_string(r.break_up_time));
}

CollisionReport collision_experiment(const CollisionSetup& setup, const ModelParams& params, const Grid& grid,
                                     const EvolveSettings& settings) {
  if (params.omega != 0.0) throw DomainError("collision experiments are defined without a trap");
  CollisionReport r;
  const PairField init = collision_initial_state(setup, params, grid);
  r.run = evolve(init, params, grid, settings);
  r.track = track_dips(r.run.times, r.run.frames, grid, 2);
  classify_collision(r, grid.dx(), 1.0 / params.background(), params.rho0 + params.k, &grid);
  if (r.run.aborted) r.notes.push_back(r.run.diagnostic);
  if (r.run.boundary_flag) r.notes.push_back("radiation reached the boundary");
  if (r.run.drift_flag) r.notes.push_back("norm/energy drift above tolerance");
  return r;
}

}  // namespace fluxlab
