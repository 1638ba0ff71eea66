#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "fluxlab/ansatz.hpp"
#include "fluxlab/error.hpp"
#include "fluxlab/io.hpp"
#include "fluxlab/particle.hpp"
#include "fluxlab/scenarios.hpp"
#include "fluxlab/spectrum.hpp"
#include "fluxlab/stationary.hpp"

using namespace fluxlab;

namespace cli {

// ------------------------------------------------------------------ output

std::string Output::open(const std::string& name) {
  const std::string path = (std::filesystem::path(dir_) / name).string();
  io::ensure_parent(path);
  files_.push_back(path);
  return path;
}

void Output::plot(const std::string& name, const std::string& svg) {
  if (svg_) svg::save(open(name), svg);
}

void Output::manifest(const std::string& command, const std::map<std::string, std::string>& config) {
  const std::string path = (std::filesystem::path(dir_) / "manifest.txt").string();
  io::ensure_parent(path);
  std::ofstream os(path, std::ios::binary);
  io::write_manifest(os, command, config, files_);
}

Output Output::sub(const std::string& sub) const { return Output((std::filesystem::path(dir_) / sub).string(), svg_); }

void Output::adopt(const Output& child) { files_.insert(files_.end(), child.files_.begin(), child.files_.end()); }

// ------------------------------------------------------------------- plots

std::string density_map(const Grid& grid, const std::vector<double>& times, const std::vector<PairField>& frames,
                        const DipTrack& track, const std::string& title, const std::vector<svg::Series>& extra) {
  const std::size_t fs = std::max<std::size_t>(1, frames.size() / 300), xs = std::max<std::size_t>(1, grid.n() / 400);
  std::vector<std::vector<double>> values;
  for (std::size_t f = 0; f < frames.size(); f += fs) {
    std::vector<double> row;
    for (std::size_t i = 0; i < grid.n(); i += xs) row.push_back(std::norm(frames[f].psi1[i]));
    values.push_back(std::move(row));
  }
  const double x1 = grid.x(((grid.n() - 1) / xs) * xs);
  const double t1 = times.empty() ? 0.0 : times[((frames.size() - 1) / fs) * fs];
  std::vector<svg::Series> overlays;
  for (std::size_t d = 0; d < track.n_dips; ++d) {
    svg::Series s{"dip " + std::to_string(d + 1), {}, {}, "#ffffff"};
    for (std::size_t f = 0; f < track.times.size(); ++f) {
      s.x.push_back(track.positions[f][d]);
      s.y.push_back(track.times[f]);
    }
    overlays.push_back(std::move(s));
  }
  overlays.insert(overlays.end(), extra.begin(), extra.end());
  return svg::heatmap(values, grid.x_min(), x1, times.empty() ? 0.0 : times.front(), t1,
                      {title, "x", "t"}, overlays);
}

std::string field_plot(const Grid& grid, const PairField& f, const std::string& title) {
  const RVec x = grid.coordinates();
  std::vector<svg::Series> s = {
      {"Re psi1", x, {}, "#000000"},
      {"Im psi1", x, {}, "#d62728"},
      {"Re psi2", x, {}, "#000000", true},
      {"Im psi2", x, {}, "#d62728", true},
  };
  for (std::size_t i = 0; i < grid.n(); ++i) {
    s[0].y.push_back(f.psi1[i].real());
    s[1].y.push_back(f.psi1[i].imag());
    s[2].y.push_back(f.psi2[i].real());
    s[3].y.push_back(f.psi2[i].imag());
  }
  return svg::line_plot(s, {title, "x", "psi"});
}

void write_collision(Output& out, const Grid& grid, const CollisionReport& r, int x_stride, const std::string& title,
                     const std::vector<svg::Series>& extra) {
  out.write("density.csv", [&](std::ostream& os) {
    io::write_density_series(os, grid, r.run.times, r.run.frames, static_cast<std::size_t>(x_stride));
  });
  out.write("dips.csv", [&](std::ostream& os) { io::write_diptrack(os, r.track); });
  out.write("outcome.txt", [&](std::ostream& os) {
    os << "outcome = " << outcome_name(r.outcome) << '\n';
    os << "t_collision = " << io::num(r.t_collision) << '\n';
    os << "min_separation = " << io::num(r.min_separation) << '\n';
    os << "merged = " << r.merged << "\ncrossed = " << r.crossed << "\nreversed = " << r.reversed << '\n';
    os << "oscillations = " << r.oscillations << "\ncore_cycles = " << r.core_cycles << '\n';
    os << "break_up = " << r.break_up << '\n';
    if (r.break_up) os << "break_up_time = " << io::num(r.break_up_time) << '\n';
    for (std::size_t i = 0; i < r.v_in.size(); ++i)
      os << "v_in_" << i + 1 << " = " << io::num(r.v_in[i]) << "\nv_out_" << i + 1 << " = " << io::num(r.v_out[i])
         << '\n';
    os << "norm_drift = " << io::num(r.run.norm_drift) << "\nenergy_drift = " << io::num(r.run.energy_drift) << '\n';
    for (const auto& n : r.notes) os << "note = " << n << '\n';
  });
  out.plot("map.svg", density_map(grid, r.run.times, r.run.frames, r.track, title, extra));
}

// ------------------------------------------------------------------ states

namespace {

PairField read_state(const std::string& path, const Grid& g) {
  std::ifstream in(path);
  if (!in) throw ConfigError("state.file: cannot read '" + path + "'");
  std::vector<double> xs;
  PairField f = io::read_field(in, &xs);
  if (xs.size() != g.n() || std::abs(xs.front() - g.x_min()) > 1e-9 || std::abs(xs.back() - g.x_max()) > 1e-9)
    throw ConfigError("state.file: '" + path + "' does not match the configured grid");
  return f;
}

PairField initial_state(const Config& c, const ModelParams& p, const Grid& g) {
  const std::string kind = c.choice("state.kind", {"fa", "dark", "fa-pair", "dark-pair", "travelling-fa",
                                                   "travelling-dark", "two-soliton", "file"});
  const int sr = c.integer("state.sign_re"), si = c.integer("state.sign_im");
  const double x0 = c.num("state.x0"), v = c.num("state.v"), half = c.num("state.half_separation");
  if (kind == "fa") return fa_profile(g, p, sr, si, x0);
  if (kind == "dark") return dark_profile(g, p, x0, sr);
  if (kind == "fa-pair" || kind == "dark-pair") {
    std::vector<SolitonSpec> specs = fa_pair(half);
    if (kind == "dark-pair")
      for (auto& s : specs) s.kind = SolitonKind::dark;
    const Parity par = c.parity("state.parity");
    return p.omega > 0 ? trapped_guess(specs, p, g, par) : splice(specs, p, g, par).field;
  }
  if (kind == "travelling-fa") return travelling_fa(p, g, v, x0, sr, si, c.newton());
  if (kind == "travelling-dark") {
    SolitonSpec s;
    s.kind = SolitonKind::travelling_dark;
    s.x0 = x0;
    s.v = v;
    s.sign_re = sr;
    return constituent(s, p, g).field;
  }
  if (kind == "two-soliton") {
    const CVec psi = two_soliton_exact(g, c.num("state.t"), p.rho0 + p.k, c.num("state.rho_min"));
    return {psi, psi};
  }
  return read_state(c.str("state.file"), g);
}

bool is_solved(const Config& c) { return c.str("state.kind") == "travelling-fa"; }

PairField solved_state(const Config& c, const ModelParams& p, const Grid& g, NewtonReport* report = nullptr) {
  const PairField guess = initial_state(c, p, g);
  if (is_solved(c)) return guess;
  return newton_stationary(guess, p, g, c.newton(), report);
}

void print_state(const PairField& s, const ModelParams& p, const Grid& g) {
  const Observables o = observables(s, p, g);
  std::printf("residual %.3e  imag_amplitude %.6f  norm %.6f  energy %.6f  relative_winding/2pi %.3f\n",
              stationary_residual(s, p, g), imag_amplitude(s), o.norm, o.energy, o.relative_winding / (2 * std::numbers::pi));
}

std::vector<double> ks_of(const std::vector<BranchPoint>& pts) {
  std::vector<double> k;
  for (const auto& p : pts) k.push_back(p.k);
  return k;
}

// ---------------------------------------------------------------- commands

int cmd_profile(const Config& c, Output& out) {
  const ModelParams p = c.model();
  const Grid g = c.grid();
  const PairField f = initial_state(c, p, g);
  out.write("field.csv", [&](std::ostream& os) { io::write_field(os, g, f); });
  out.plot("profile.svg", field_plot(g, f, c.str("state.kind") + " profile"));
  print_state(f, p, g);
  return 0;
}

int cmd_stationary(const Config& c, Output& out) {
  const ModelParams p = c.model();
  const Grid g = c.grid();
  NewtonReport rep;
  const PairField s = solved_state(c, p, g, &rep);
  out.write("state.csv", [&](std::ostream& os) { io::write_field(os, g, s); });
  out.write("newton.csv", [&](std::ostream& os) {
    os << "iteration,residual\n";
    for (std::size_t i = 0; i < rep.history.size(); ++i) os << i << ',' << io::num(rep.history[i]) << '\n';
  });
  out.plot("state.svg", field_plot(g, s, "stationary state"));
  if (!is_solved(c)) std::printf("newton: %d iterations, min rcond %.2e\n", rep.iterations, rep.min_rcond);
  print_state(s, p, g);
  return 0;
}

scenarios::TrappedBranch branch_of(const Config& c, const ModelParams& p, const Grid& g) {
  const double lo = c.num("branch.k_lo"), hi = c.num("branch.k_hi"), dk = c.num("branch.dk");
  if (!(lo <= p.k && p.k <= hi)) throw ConfigError("model.k must lie in [branch.k_lo, branch.k_hi]");
  if (!(dk > 0)) throw ConfigError("branch.dk: must be positive");
  const NewtonSettings ns = c.newton();
  const BranchPoint seed = solve_point(initial_state(c, p, g), p.k, p, g, ns);
  return scenarios::two_way_branch(seed, p, g, lo, hi, dk, ns);
}

int cmd_continue(const Config& c, Output& out) {
  const ModelParams p = c.model();
  const Grid g = c.grid();
  const auto tb = branch_of(c, p, g);
  Branch b;
  b.points = tb.points;
  b.k_ce = tb.k_ce;
  out.write("branch.csv", [&](std::ostream& os) { io::write_branch(os, b); });
  svg::Series amp{"imag amplitude", ks_of(b.points), {}};
  for (const auto& pt : b.points) amp.y.push_back(pt.imag_amplitude);
  out.plot("branch.svg", svg::line_plot({amp}, {"branch", "k", "max |Im psi1|"}));
  if (b.k_ce) std::printf("k_ce %.6g\n", *b.k_ce);
  else std::printf("k_ce not reached\n");
  if (tb.lost) std::printf("branch lost before the end of the range\n");
  try {
    const PitchforkFit fit = fit_pitchfork(b);
    std::printf("pitchfork fit: k_c %.6f  exponent %.4f\n", fit.k_c, fit.beta);
  } catch (const Error&) {
  }
  return tb.lost ? 3 : 0;
}

int cmd_spectrum(const Config& c, Output& out) {
  const ModelParams p = c.model();
  const Grid g = c.grid();
  const PairField s = solved_state(c, p, g);
  const Spectrum sp = eig_spectrum(assemble_bdg(s, p, g, c.newton().tol), c.spectrum());
  out.write("spectrum.csv", [&](std::ostream& os) { io::write_spectrum(os, sp); });
  if (!sp.modes.empty()) {
    out.write("unstable_modes.csv", [&](std::ostream& os) {
      os << "mode,re_lambda,im_lambda,x,re_a1,im_a1,re_a2,im_a2,re_b1,im_b1,re_b2,im_b2\n";
      for (std::size_t m = 0; m < sp.eigenvalues.size(); ++m) {
        if (std::abs(sp.eigenvalues[m].imag()) < c.spectrum().threshold * p.rho0) continue;
        const Mode& md = sp.modes[m];
        for (std::size_t i = 0; i < g.n(); ++i)
          os << m << ',' << io::num(sp.eigenvalues[m].real()) << ',' << io::num(sp.eigenvalues[m].imag()) << ','
             << io::num(g.x(i)) << ',' << io::num(md.a1[i].real()) << ',' << io::num(md.a1[i].imag()) << ','
             << io::num(md.a2[i].real()) << ',' << io::num(md.a2[i].imag()) << ',' << io::num(md.b1[i].real())
             << ',' << io::num(md.b1[i].imag()) << ',' << io::num(md.b2[i].real()) << ','
             << io::num(md.b2[i].imag()) << '\n';
      }
    });
  }
  svg::Series pts{"eigenvalues", {}, {}};
  for (const auto& l : sp.eigenvalues) {
    pts.x.push_back(l.real());
    pts.y.push_back(l.imag());
  }
  out.plot("spectrum.svg", svg::scatter({pts}, {"BdG spectrum", "Re lambda", "Im lambda"}));
  std::printf("%s: max |Im lambda| %.6g, most unstable (%.6g, %.6g), symmetry error %.2e\n",
              sp.stable ? "stable" : "unstable", sp.max_im, sp.max_unstable.real(), sp.max_unstable.imag(),
              sp.symmetry_error);
  return 0;
}

int cmd_sweep(const Config& c, Output& out) {
  const ModelParams p = c.model();
  const Grid g = c.grid();
  const auto tb = branch_of(c, p, g);
  SpectrumOptions o;
  o.threshold = c.num("spectrum.threshold");
  const StabilitySweep sw = stability_sweep(tb.points, p, g, o, c.newton().tol);
  out.write("sweep.csv", [&](std::ostream& os) { io::write_sweep(os, sw); });
  out.write("windows.csv", [&](std::ostream& os) {
    os << "k_from,k_to,stable\n";
    for (const auto& w : sw.windows) os << io::num(w.k_from) << ',' << io::num(w.k_to) << ',' << w.stable << '\n';
  });
  svg::Series im{"max Im lambda", ks_of(tb.points), {}}, re{"Re of most unstable", ks_of(tb.points), {}, "#d62728", true};
  for (const auto& r : sw.rows) {
    im.y.push_back(r.max_im);
    re.y.push_back(r.re_of_max);
  }
  out.plot("sweep.svg", svg::line_plot({im, re}, {"stability", "k", "lambda"}));
  for (const auto& w : sw.windows)
    std::printf("[%.4g, %.4g] %s\n", w.k_from, w.k_to, w.stable ? "stable" : "unstable");
  if (tb.k_ce) std::printf("k_ce %.4g\n", *tb.k_ce);
  if (sw.k_cs) std::printf("k_cs %.4g\n", *sw.k_cs);
  return tb.lost ? 3 : 0;
}

int cmd_evolve(const Config& c, Output& out) {
  const ModelParams p = c.model();
  const Grid g = c.grid();
  const EvolveSettings es = c.evolve();
  const int n_dips = c.integer("evolve.n_dips"), stride = c.integer("evolve.x_stride");
  if (n_dips < 1) throw ConfigError("evolve.n_dips: must be at least 1");
  if (stride < 1) throw ConfigError("evolve.x_stride: must be at least 1");
  const PairField init = c.flag("evolve.solve") ? solved_state(c, p, g) : initial_state(c, p, g);
  const EvolveResult r = evolve(init, p, g, es);
  const DipTrack tr = track_dips(r.times, r.frames, g, static_cast<std::size_t>(n_dips));
  out.write("density.csv", [&](std::ostream& os) {
    io::write_density_series(os, g, r.times, r.frames, static_cast<std::size_t>(stride));
  });
  out.write("dips.csv", [&](std::ostream& os) { io::write_diptrack(os, tr); });
  // Departure is only meaningful when every tracked dip exists at t = 0.
  const bool tracked = std::all_of(tr.positions.front().begin(), tr.positions.front().end(),
                                   [](double x) { return std::isfinite(x); });
  const auto dep = tracked ? departure_time(tr, 0.1 * (p.rho0 + p.k), 0.5) : std::nullopt;
  out.write("run.txt", [&](std::ostream& os) {
    os << "dt = " << io::num(r.dt) << "\nnorm_drift = " << io::num(r.norm_drift)
       << "\nenergy_drift = " << io::num(r.energy_drift) << "\nboundary_flag = " << r.boundary_flag
       << "\naborted = " << r.aborted << '\n';
    if (dep) os << "departure_time = " << io::num(*dep) << '\n';
    if (!r.diagnostic.empty()) os << "diagnostic = " << r.diagnostic << '\n';
  });
  out.plot("map.svg", density_map(g, r.times, r.frames, tr, "|psi1|^2"));
  std::printf("t_end %.6g  norm drift %.2e  energy drift %.2e", r.times.back(), r.norm_drift, r.energy_drift);
  if (dep) std::printf("  departure at t=%.4g", *dep);
  std::printf("\n");
  if (r.aborted) {
    std::fprintf(stderr, "evolution aborted: %s\n", r.diagnostic.c_str());
    return 3;
  }
  return 0;
}

int cmd_collide(const Config& c, Output& out) {
  const ModelParams p = c.model();
  if (p.omega != 0.0) throw ConfigError("model.omega: collisions are run without a trap");
  const Grid g = c.grid();
  const CollisionSetup setup{c.soliton("left"), c.soliton("right"), c.parity("collide.parity")};
  const int stride = c.integer("evolve.x_stride");
  if (stride < 1) throw ConfigError("evolve.x_stride: must be at least 1");
  const CollisionReport r = collision_experiment(setup, p, g, c.evolve());
  write_collision(out, g, r, stride, "collision");
  std::printf("outcome %s  t_collision %.4g  min separation %.4g", outcome_name(r.outcome), r.t_collision,
              r.min_separation);
  if (r.break_up) std::printf("  break-up at t=%.4g", r.break_up_time);
  std::printf("\n");
  if (r.run.aborted) {
    std::fprintf(stderr, "evolution aborted: %s\n", r.run.diagnostic.c_str());
    return 3;
  }
  return 0;
}

int cmd_particle(const Config& c, Output& out) {
  const ModelParams p = c.model();
  if (c.flag("particle.fixed_point")) {
    Frequency e10;
    double x = 0;
    FaFrequencies f;
    try {
      x = fa_fixed_point(p.k, p.rho0, p.omega);
      f = fa_frequencies(p.k, p.rho0, p.omega, x);
      e10 = eq10_frequency(p.k, p.omega);
    } catch (const DomainError& e) {
      throw ConfigError(std::string("particle.fixed_point: ") + e.what());
    }
    auto show = [](const Frequency& q) { return io::num(q.value) + (q.imaginary ? "i" : ""); };
    out.write("fixed_point.csv", [&](std::ostream& os) {
      os << "k,omega,x_tilde,omega_in,omega_out,omega_single\n";
      os << io::num(p.k) << ',' << io::num(p.omega) << ',' << io::num(x) << ',' << show(f.in_phase) << ','
         << show(f.out_of_phase) << ',' << show(e10) << '\n';
    });
    std::printf("x_tilde %s  omega_in %s  omega_out %s  (single FA %s)\n", io::num(x).c_str(),
                show(f.in_phase).c_str(), show(f.out_of_phase).c_str(), show(e10).c_str());
    return 0;
  }
  const std::vector<double> x = c.list("particle.x"), v = c.list("particle.v");
  if (x.size() != v.size()) throw ConfigError("particle.x and particle.v must have the same length");
  const double dt = c.num("particle.dt"), t_end = c.num("particle.t_end");
  if (!(dt > 0) || !(t_end > 0)) throw ConfigError("particle.dt and particle.t_end must be positive");
  const DepthModel dm = c.choice("particle.depth", {"velocity", "frozen"}) == "frozen" ? DepthModel::frozen
                                                                                        : DepthModel::velocity_dependent;
  ParticleState s0;
  try {
    s0 = ParticleState::make(x, v, p.rho0);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("particle: ") + e.what());
  }
  const int every = std::max(1, static_cast<int>(std::lround(0.1 / dt)));
  const ParticleTrajectory tr = integrate_particles(s0, p.rho0, t_end, dm, dt, every);
  out.write("trajectory.csv", [&](std::ostream& os) { io::write_trajectory(os, tr); });
  std::vector<svg::Series> lines;
  for (std::size_t i = 0; i < x.size(); ++i) {
    svg::Series s{"x_" + std::to_string(i + 1), {}, {}};
    for (std::size_t f = 0; f < tr.t.size(); ++f) {
      s.x.push_back(tr.states[f].x[i]);
      s.y.push_back(tr.t[f]);
    }
    lines.push_back(std::move(s));
  }
  out.plot("trajectory.svg", svg::line_plot(lines, {"particle model", "x", "t"}));
  if (x.size() == 2) {
    double m = 1e300;
    for (const auto& s : tr.states) m = std::min(m, std::abs(s.x[1] - s.x[0]));
    std::printf("closest approach %.6g\n", m);
  }
  const auto& last = tr.states.back();
  for (std::size_t i = 0; i < last.size(); ++i) std::printf("x_%zu %.6g  v_%zu %.6g\n", i + 1, last.x[i], i + 1, last.v[i]);
  return 0;
}

}  // namespace

int run_command(const std::string& command, const Config& c) {
  Output out(c.str("output.dir"), c.flag("output.svg"));
  int status = 0;
  if (command == "profile") status = cmd_profile(c, out);
  else if (command == "stationary") status = cmd_stationary(c, out);
  else if (command == "continue") status = cmd_continue(c, out);
  else if (command == "spectrum") status = cmd_spectrum(c, out);
  else if (command == "sweep") status = cmd_sweep(c, out);
  else if (command == "evolve") status = cmd_evolve(c, out);
  else if (command == "collide") status = cmd_collide(c, out);
  else if (command == "particle") status = cmd_particle(c, out);
  else throw ConfigError("unknown command '" + command + "'");
  out.manifest(command, c.values());
  return status;
}

}  // namespace cli
