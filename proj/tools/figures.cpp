// One-shot recipes for the published figures, numbered in order of
// appearance. Panels are addressed as "1a"; a bare number runs all panels.

#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>

#include "commands.hpp"
#include "fluxlab/ansatz.hpp"
#include "fluxlab/error.hpp"
#include "fluxlab/io.hpp"
#include "fluxlab/particle.hpp"
#include "fluxlab/scenarios.hpp"
#include "fluxlab/spectrum.hpp"

using namespace fluxlab;
namespace sc = fluxlab::scenarios;

namespace cli {

namespace {

constexpr double trap = 0.1;

// Particle-model dips for a dark-soliton scenario: the in-phase coupled pair
// is a single NLS with background rho0 + k.
ParticleTrajectory particle_model(const sc::Scenario& s) {
  const double rho = 1.0 + s.k, c = std::sqrt(rho);
  const auto st =
      ParticleState::make({s.setup.left.x0, s.setup.right.x0}, {c * s.setup.left.v, c * s.setup.right.v}, rho);
  return integrate_particles(st, rho, s.t_end);
}

void collision_panel(Output& out, const sc::Scenario& s, bool overlay) {
  const CollisionReport r = sc::run(s, sc::collision_noise, 0.1);
  std::vector<svg::Series> extra;
  if (overlay) {
    const ParticleTrajectory tr = particle_model(s);
    out.write("particle.csv", [&](std::ostream& os) { io::write_trajectory(os, tr); });
    for (int i = 0; i < 2; ++i) {
      svg::Series line{"particle model", {}, {}, "#00ff00", true};
      for (std::size_t f = 0; f < tr.t.size(); ++f) {
        line.x.push_back(tr.states[f].x[i]);
        line.y.push_back(tr.t[f]);
      }
      extra.push_back(std::move(line));
    }
  }
  const Grid g = Grid::with_spacing(-s.half_width, s.half_width, s.dx);
  write_collision(out, g, r, 2, s.name + ", k=" + io::num(s.k), extra);
  std::printf("%s (k=%s): %s", s.name.c_str(), io::num(s.k).c_str(), outcome_name(r.outcome));
  if (r.break_up) std::printf(", break-up at t=%.4g", r.break_up_time);
  std::printf("\n");
}

sc::Scenario fa_static_target(Parity parity, double v) {
  sc::Scenario s = sc::fa_pair_collision(parity, 0.1, v, 10.0, v < 0.4 ? 120.0 : 50.0);
  s.setup.right.x0 = 0.0;
  s.setup.right.v = 0.0;
  s.name = std::string(parity == Parity::even ? "even" : "odd") + " FA hitting a static FA, v=" + io::num(v);
  return s;
}

void profile_panel(Output& out, const Grid& g, const PairField& f, const ModelParams& p, const std::string& title) {
  out.write("field.csv", [&](std::ostream& os) { io::write_field(os, g, f); });
  out.plot("profile.svg", field_plot(g, f, title));
  std::printf("%s: residual %.2e, imag amplitude %.4f\n", title.c_str(), stationary_residual(f, p, g),
              imag_amplitude(f));
}

void spectrum_panel(Output& out, const Grid& g, const PairField& f, const ModelParams& p, const std::string& title) {
  const Spectrum sp = eig_spectrum(assemble_bdg(f, p, g));
  out.write("spectrum.csv", [&](std::ostream& os) { io::write_spectrum(os, sp); });
  svg::Series pts{"eigenvalues", {}, {}};
  for (const auto& l : sp.eigenvalues) {
    pts.x.push_back(l.real());
    pts.y.push_back(l.imag());
  }
  out.plot("spectrum.svg", svg::scatter({pts}, {title, "Re lambda", "Im lambda"}));
  std::printf("%s: %s, most unstable (%.4f, %.4f)\n", title.c_str(), sp.stable ? "stable" : "unstable",
              sp.max_unstable.real(), sp.max_unstable.imag());
}

void trapped_evolution(Output& out, Parity parity, double k, double t_end) {
  const Grid g = sc::trapped_grid();
  const ModelParams p{1.0, k, trap};
  EvolveSettings es;
  es.t_end = t_end;
  es.record_dt = 0.5;
  es.noise = sc::stationary_noise;
  const EvolveResult r = evolve(sc::trapped_state(parity, k, trap, g), p, g, es);
  const DipTrack tr = track_dips(r.times, r.frames, g, 2);
  out.write("density.csv", [&](std::ostream& os) { io::write_density_series(os, g, r.times, r.frames, 1); });
  out.write("dips.csv", [&](std::ostream& os) { io::write_diptrack(os, tr); });
  const auto dep = departure_time(tr, 0.1, 0.5);
  out.write("run.txt", [&](std::ostream& os) {
    os << "noise = " << io::num(es.noise) << "\nnorm_drift = " << io::num(r.norm_drift)
       << "\nenergy_drift = " << io::num(r.energy_drift) << '\n';
    if (dep) os << "departure_time = " << io::num(*dep) << '\n';
  });
  out.plot("map.svg", density_map(g, r.times, r.frames, tr, (parity == Parity::odd ? "(+-)" : "(++)") +
                                                               std::string(" k=") + io::num(k)));
  std::printf("trapped %s k=%s: departure at t=%s\n", parity == Parity::odd ? "(+-)" : "(++)", io::num(k).c_str(),
              dep ? io::num(*dep).c_str() : "none");
}

void stability_curve(Output& out, Parity parity, bool with_variational) {
  const Grid g = sc::trapped_grid();
  const ModelParams p{1.0, 0.25, trap};
  const auto b = sc::trapped_branch(parity, trap, g, 0.05, 0.45, 0.01);
  const StabilitySweep sw = stability_sweep(b.points, p, g);
  out.write("sweep.csv", [&](std::ostream& os) { io::write_sweep(os, sw); });
  svg::Series im{"max Im lambda", {}, {}}, re{"Re of most unstable", {}, {}, "#d62728", true};
  for (const auto& r : sw.rows) {
    im.x.push_back(r.k);
    im.y.push_back(r.max_im);
    re.x.push_back(r.k);
    re.y.push_back(r.re_of_max);
  }
  std::vector<svg::Series> lines = {im};
  if (!with_variational) lines.push_back(re);
  if (with_variational) {
    // Dark-soliton pairs below k_ce: continue the dark end of the branch down.
    const BranchPoint& top = b.points.back();
    const Branch dark = continue_in_k(top, 0.05, 0.01, {1.0, top.k, trap}, g);
    std::vector<BranchPoint> dk(dark.points.rbegin(), dark.points.rend());
    const StabilitySweep dsw = stability_sweep(dk, p, g);
    out.write("dark_sweep.csv", [&](std::ostream& os) { io::write_sweep(os, dsw); });
    svg::Series dl{"dark solitons", {}, {}, "#7f7f7f", true};
    for (const auto& r : dsw.rows) {
      dl.x.push_back(r.k);
      dl.y.push_back(r.max_im);
    }
    std::vector<io::FrequencyRow> rows;
    svg::Series var{"variational omega_out", {}, {}, "#2ca02c", true};
    for (const auto& r : sw.rows) {
      if (r.k <= 0.2) continue;
      const FaFrequencies f = fa_frequencies(r.k, 1.0, trap, fa_fixed_point(r.k, 1.0, trap));
      rows.push_back({r.k, f.in_phase.value, f.out_of_phase.value, r.max_im});
      var.x.push_back(r.k);
      var.y.push_back(f.out_of_phase.value);
    }
    out.write("frequencies.csv", [&](std::ostream& os) { io::write_frequencies(os, rows); });
    lines.push_back(dl);
    lines.push_back(var);
  }
  out.plot("sweep.svg", svg::line_plot(lines, {"Omega = 0.1", "k", "lambda"}));
  for (const auto& w : sw.windows) std::printf("[%.2f, %.2f] %s\n", w.k_from, w.k_to, w.stable ? "stable" : "unstable");
  if (b.k_ce) std::printf("k_ce %.2f\n", *b.k_ce);
  if (sw.k_cs) std::printf("k_cs %.2f\n", *sw.k_cs);
}

using Recipe = std::function<void(Output&)>;

const std::map<std::string, Recipe>& recipes() {
  static const std::map<std::string, Recipe> r = {
      {"1a", [](Output& o) { collision_panel(o, sc::dark_pair(0.0, 0.1, 8.0, 100.0), true); }},
      {"1b", [](Output& o) { collision_panel(o, sc::dark_pair(0.0, 0.6, 10.0, 40.0), true); }},
      {"1c", [](Output& o) { collision_panel(o, sc::dark_exchange(0.0, 0.5, 10.0, 50.0), true); }},
      {"2a", [](Output& o) { collision_panel(o, sc::dark_pair(0.1, 0.2, 8.0, 200.0), true); }},
      {"2b", [](Output& o) { collision_panel(o, sc::dark_pair(0.1, 0.6, 10.0, 40.0), true); }},
      {"2c", [](Output& o) { collision_panel(o, sc::dark_exchange(0.1, 0.5, 10.0, 50.0), true); }},
      {"3",
       [](Output& o) {
         const Grid g = Grid::with_spacing(-20, 20, 0.05);
         const ModelParams p{1.0, 0.1, 0.0};
         const PairField f = travelling_fa(p, g, 0.2);
         o.write("field.csv", [&](std::ostream& os) { io::write_field(os, g, f); });
         o.plot("profile.svg", field_plot(g, f, "FA travelling with v=0.2, k=0.1"));
         std::printf("travelling FA v=0.2: imag amplitude %.4f\n", imag_amplitude(f));
       }},
      {"4",
       [](Output& o) {
         for (Parity par : {Parity::odd, Parity::even}) {
           const sc::Scenario s = sc::fa_pair_collision(par, 0.1, 0.2, 10.0, 0.0);
           const Grid g = Grid::with_spacing(-s.half_width, s.half_width, s.dx);
           const PairField f = collision_initial_state(s.setup, {1.0, s.k, 0.0}, g);
           Output sub = o.sub(par == Parity::odd ? "odd" : "even");
           sub.write("field.csv", [&](std::ostream& os) { io::write_field(os, g, f); });
           sub.plot("profile.svg", field_plot(g, f, s.name));
           o.adopt(sub);
         }
       }},
      {"5a", [](Output& o) { collision_panel(o, sc::fa_pair_collision(Parity::odd, 0.1, 0.2, 10.0, 120.0), false); }},
      {"5b", [](Output& o) { collision_panel(o, sc::fa_pair_collision(Parity::odd, 0.1, 0.6, 10.0, 50.0), false); }},
      {"6a", [](Output& o) { collision_panel(o, sc::fa_pair_collision(Parity::even, 0.1, 0.1, 10.0, 200.0), false); }},
      {"6b", [](Output& o) { collision_panel(o, sc::fa_pair_collision(Parity::even, 0.1, 0.2, 10.0, 120.0), false); }},
      {"6c", [](Output& o) { collision_panel(o, sc::fa_pair_collision(Parity::even, 0.1, 0.6, 10.0, 50.0), false); }},
      {"7a", [](Output& o) { collision_panel(o, fa_static_target(Parity::odd, 0.2), false); }},
      {"7b", [](Output& o) { collision_panel(o, fa_static_target(Parity::odd, 0.6), false); }},
      {"8a", [](Output& o) { collision_panel(o, fa_static_target(Parity::even, 0.2), false); }},
      {"8b", [](Output& o) { collision_panel(o, fa_static_target(Parity::even, 0.6), false); }},
      {"9",
       [](Output& o) {
         const Grid g = sc::trapped_grid();
         profile_panel(o, g, sc::trapped_state(Parity::odd, 0.2, trap, g), {1.0, 0.2, trap}, "(+-) FAs, k=0.2");
       }},
      {"10",
       [](Output& o) {
         const Grid g = sc::trapped_grid();
         profile_panel(o, g, sc::trapped_state(Parity::odd, 0.5, trap, g), {1.0, 0.5, trap},
                       "coupled dark solitons, k=0.5");
       }},
      {"11",
       [](Output& o) {
         const Grid g = sc::trapped_grid();
         spectrum_panel(o, g, sc::trapped_state(Parity::odd, 0.2, trap, g), {1.0, 0.2, trap}, "(+-) FAs, k=0.2");
       }},
      {"12", [](Output& o) { stability_curve(o, Parity::odd, true); }},
      {"13", [](Output& o) { trapped_evolution(o, Parity::odd, 0.2, 200.0); }},
      {"14",
       [](Output& o) {
         const Grid g = sc::trapped_grid();
         profile_panel(o, g, sc::trapped_state(Parity::even, 0.25, trap, g), {1.0, 0.25, trap}, "(++) FAs, k=0.25");
       }},
      {"15",
       [](Output& o) {
         const Grid g = sc::trapped_grid();
         spectrum_panel(o, g, sc::trapped_state(Parity::even, 0.25, trap, g), {1.0, 0.25, trap},
                        "(++) FAs, k=0.25");
       }},
      {"16", [](Output& o) { stability_curve(o, Parity::even, false); }},
      {"17", [](Output& o) { trapped_evolution(o, Parity::even, 0.1, 150.0); }},
  };
  return r;
}

}  // namespace

std::vector<std::string> figure_ids() {
  std::vector<std::string> ids;
  for (const auto& [id, _] : recipes()) ids.push_back(id);
  return ids;
}

int run_figure(const std::string& id, const std::string& out_dir, bool svg) {
  std::vector<std::string> panels;
  for (const auto& [key, _] : recipes())
    if (key == id || (key.size() == id.size() + 1 && key.compare(0, id.size(), id) == 0 &&
                      std::isalpha(static_cast<unsigned char>(key.back()))))
      panels.push_back(key);
  if (panels.empty()) throw ConfigError("unknown figure '" + id + "'");
  Output all((std::filesystem::path(out_dir) / ("figure" + id)).string(), svg);
  for (const auto& key : panels) {
    Output o = key == id ? all : all.sub(key.substr(id.size()));
    recipes().at(key)(o);
    if (key != id) all.adopt(o);
    else all = o;
  }
  all.manifest("figure " + id, {{"figure", id}, {"noise.collision", io::num(sc::collision_noise)},
                                {"noise.stationary", io::num(sc::stationary_noise)}});
  return 0;
}

}  // namespace cli
