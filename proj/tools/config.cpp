#include "config.hpp"

#include "fluxlab/error.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

namespace cli {

namespace {

const std::vector<Key> model_keys = {
    {"model.rho0", "1", "chemical potential rho0 > 0", "--rho0"},
    {"model.k", "0.1", "linear coupling", "--k"},
    {"model.omega", "0", "trap strength", "--omega"},
};

std::vector<Key> grid_keys(const std::string& xmin, const std::string& xmax, const std::string& dx) {
  return {
      {"grid.xmin", xmin, "left end of the domain", ""},
      {"grid.xmax", xmax, "right end of the domain", ""},
      {"grid.dx", dx, "grid spacing (largest allowed; n is rounded up)", "--dx"},
      {"grid.stencil", "5", "Laplacian stencil: 3 or 5 points", ""},
  };
}

const std::vector<Key> newton_keys = {
    {"newton.tol", "1e-10", "residual tolerance", ""},
    {"newton.max_iter", "50", "iteration cap", ""},
    {"newton.symmetry", "conjugate", "conjugate | free", ""},
    {"newton.max_step", "0.2", "largest update (max-norm)", ""},
};

std::vector<Key> state_keys(const std::string& kind) {
  return {
      {"state.kind", kind, "fa | dark | fa-pair | dark-pair | travelling-fa | travelling-dark | two-soliton | file", ""},
      {"state.parity", "odd", "odd (+-) | even (++) for pairs", "--parity"},
      {"state.half_separation", "1.5", "pairs: cores at -+ this", ""},
      {"state.x0", "0", "core position", ""},
      {"state.v", "0.2", "velocity of travelling states", "--v"},
      {"state.sign_re", "1", "sign of the real (tanh) part", ""},
      {"state.sign_im", "1", "sign of the imaginary (sech) part", ""},
      {"state.t", "0", "two-soliton: time", ""},
      {"state.rho_min", "0.25", "two-soliton: density at closest approach", ""},
      {"state.file", "", "field CSV for kind = file", ""},
  };
}

std::vector<Key> evolve_keys(const std::string& t_end, const std::string& record_dt, const std::string& noise) {
  return {
      {"evolve.t_end", t_end, "final time", "--t-end"},
      {"evolve.record_dt", record_dt, "time between recorded frames", ""},
      {"evolve.cfl", "0.1", "dt = cfl dx^2", ""},
      {"evolve.noise", noise, "amplitude of the seeding noise", "--noise"},
      {"evolve.seed", "20240101", "noise seed", ""},
      {"evolve.n_dips", "2", "dips to track", ""},
      {"evolve.x_stride", "2", "write every n-th grid point of the density", ""},
  };
}

std::vector<Key> soliton_keys(const std::string& side, const std::string& x0, const std::string& v) {
  return {
      {side + ".kind", "travelling-dark", "fa | dark | travelling-dark", ""},
      {side + ".x0", x0, "core position", ""},
      {side + ".v", v, "velocity (units of the sound speed)", ""},
      {side + ".sign_re", "1", "sign of the tanh part", ""},
      {side + ".sign_im", "1", "FA: sign of the sech part", ""},
  };
}

const std::vector<Key> output_keys = {
    {"output.dir", "out", "output directory", "--out"},
    {"output.svg", "true", "also write SVG plots", ""},
};

void append(std::vector<Key>& to, const std::vector<Key>& from) { to.insert(to.end(), from.begin(), from.end()); }

}  // namespace

std::vector<Key> keys_for(const std::string& command) {
  std::vector<Key> k = output_keys;
  append(k, model_keys);
  if (command == "profile") {
    append(k, grid_keys("-20", "20", "0.05"));
    append(k, state_keys("fa"));
  } else if (command == "stationary" || command == "spectrum") {
    append(k, grid_keys("-20", "20", "0.05"));
    append(k, newton_keys);
    append(k, state_keys("fa"));
    if (command == "spectrum") {
      append(k, {{"spectrum.threshold", "1e-6", "stability threshold on |Im lambda| / rho0", ""},
                 {"spectrum.modes", "false", "also write eigenvectors of unstable modes", "", true}});
    }
  } else if (command == "continue" || command == "sweep") {
    append(k, grid_keys("-20", "20", "0.05"));
    append(k, newton_keys);
    append(k, state_keys("fa"));
    append(k, {{"branch.k_lo", "0.05", "lower end of the k range", "--k-lo"},
               {"branch.k_hi", "0.36", "upper end of the k range", "--k-hi"},
               {"branch.dk", "0.01", "continuation step", "--dk"}});
    if (command == "sweep") append(k, {{"spectrum.threshold", "1e-6", "stability threshold", ""}});
  } else if (command == "evolve") {
    append(k, grid_keys("-20", "20", "0.05"));
    append(k, newton_keys);
    append(k, state_keys("fa"));
    append(k, {{"evolve.solve", "false", "Newton-polish the initial state first", "--solve", true}});
    append(k, evolve_keys("100", "0.25", "0"));
  } else if (command == "collide") {
    append(k, grid_keys("-60", "60", "0.1"));
    append(k, soliton_keys("left", "-8", "0.1"));
    append(k, soliton_keys("right", "8", "-0.1"));
    append(k, {{"collide.parity", "odd", "odd | even connection of FA pairs", "--parity"}});
    append(k, evolve_keys("100", "0.1", "1e-12"));
  } else if (command == "particle") {
    append(k, {{"particle.x", "-8,8", "initial positions", "--x"},
               {"particle.v", "0.1,-0.1", "initial velocities", "--v"},
               {"particle.t_end", "100", "final time", "--t-end"},
               {"particle.dt", "1e-3", "time step", ""},
               {"particle.depth", "velocity", "velocity | frozen", ""},
               {"particle.fixed_point", "false", "trapped FA pair: fixed point and frequencies at model.k",
                "--fixed-point", true}});
  } else if (command == "figure") {
    // Recipes carry their own parameters.
  } else {
    throw ConfigError("unknown command '" + command + "'");
  }
  return k;
}

Config::Config(const std::vector<Key>& keys) {
  for (const auto& k : keys) values_[k.name] = k.value;
}

void Config::set(const std::string& key, const std::string& value) {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown key '" + key + "'");
  it->second = value;
}

void Config::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigTOML().from_config(in);
  } catch (const CLI::Error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  for (const auto& item : items) {
    if (item.name == "++" || item.name == "--") continue;
    std::string joined;
    for (const auto& s : item.inputs) joined += (joined.empty() ? "" : ",") + s;
    try {
      set(item.fullname(), joined);
    } catch (const ConfigError& e) {
      throw ConfigError(path + ": " + e.what());
    }
  }
}

std::string Config::str(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("key '" + key + "' is not defined for this command");
  return it->second;
}

double Config::num(const std::string& key) const {
  const std::string s = str(key);
  double v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size() || !std::isfinite(v))
    throw ConfigError(key + ": expected a number, got '" + s + "'");
  return v;
}

int Config::integer(const std::string& key) const {
  const double v = num(key);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError(key + ": expected an integer, got '" + str(key) + "'");
  return static_cast<int>(v);
}

bool Config::flag(const std::string& key) const {
  const std::string s = str(key);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError(key + ": expected true or false, got '" + s + "'");
}

std::vector<double> Config::list(const std::string& key) const {
  std::vector<double> out;
  const std::string s = str(key);
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t next = std::min(s.find(',', pos), s.size());
    std::string item = s.substr(pos, next - pos);
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    double v = 0;
    const auto [end, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || end != item.data() + item.size())
      throw ConfigError(key + ": expected a comma-separated list of numbers, got '" + s + "'");
    out.push_back(v);
    pos = next + 1;
  }
  return out;
}

std::string Config::choice(const std::string& key, const std::vector<std::string>& allowed) const {
  const std::string s = str(key);
  for (const auto& a : allowed)
    if (a == s) return s;
  std::string opts;
  for (const auto& a : allowed) opts += (opts.empty() ? "" : " | ") + a;
  throw ConfigError(key + ": expected one of " + opts + ", got '" + s + "'");
}

namespace {

template <class F>
auto validated(const std::string& what, F&& f) {
  try {
    return f();
  } catch (const fluxlab::DomainError& e) {
    throw ConfigError(what + ": " + e.what());
  }
}

}  // namespace

fluxlab::ModelParams Config::model() const {
  const fluxlab::ModelParams p{num("model.rho0"), num("model.k"), num("model.omega")};
  validated("model", [&] {
    p.validate();
    return 0;
  });
  return p;
}

fluxlab::Grid Config::grid() const {
  const int st = integer("grid.stencil");
  if (st != 3 && st != 5) throw ConfigError("grid.stencil: expected 3 or 5");
  const double dx = num("grid.dx");
  if (!(dx > 0)) throw ConfigError("grid.dx: must be positive");
  return validated("grid", [&] {
    return fluxlab::Grid::with_spacing(num("grid.xmin"), num("grid.xmax"), dx,
                                       st == 3 ? fluxlab::Stencil::three_point : fluxlab::Stencil::five_point,
                                       std::max(dx, fluxlab::Grid::default_max_dx));
  });
}

fluxlab::NewtonSettings Config::newton() const {
  fluxlab::NewtonSettings s;
  s.tol = num("newton.tol");
  s.max_iter = integer("newton.max_iter");
  s.max_step = num("newton.max_step");
  s.symmetry = choice("newton.symmetry", {"conjugate", "free"}) == "free" ? fluxlab::Symmetry::free
                                                                          : fluxlab::Symmetry::conjugate;
  validated("newton", [&] {
    s.validate();
    return 0;
  });
  return s;
}

fluxlab::EvolveSettings Config::evolve() const {
  fluxlab::EvolveSettings s;
  s.t_end = num("evolve.t_end");
  s.record_dt = num("evolve.record_dt");
  s.cfl = num("evolve.cfl");
  s.noise = num("evolve.noise");
  const double seed = num("evolve.seed");
  if (seed < 0 || seed != std::floor(seed)) throw ConfigError("evolve.seed: expected a non-negative integer");
  s.seed = static_cast<std::uint64_t>(seed);
  validated("evolve", [&] {
    s.validate();
    return 0;
  });
  return s;
}

fluxlab::SpectrumOptions Config::spectrum() const {
  fluxlab::SpectrumOptions o;
  o.threshold = num("spectrum.threshold");
  if (!(o.threshold > 0)) throw ConfigError("spectrum.threshold: must be positive");
  if (values_.count("spectrum.modes")) o.want_modes = flag("spectrum.modes");
  return o;
}

fluxlab::Parity Config::parity(const std::string& key) const {
  return choice(key, {"odd", "even"}) == "even" ? fluxlab::Parity::even : fluxlab::Parity::odd;
}

fluxlab::SolitonSpec Config::soliton(const std::string& section) const {
  fluxlab::SolitonSpec s;
  const std::string kind = choice(section + ".kind", {"fa", "dark", "travelling-dark"});
  s.kind = kind == "fa" ? fluxlab::SolitonKind::fa
                        : kind == "dark" ? fluxlab::SolitonKind::dark : fluxlab::SolitonKind::travelling_dark;
  s.x0 = num(section + ".x0");
  s.v = num(section + ".v");
  s.sign_re = integer(section + ".sign_re");
  s.sign_im = integer(section + ".sign_im");
  validated(section, [&] {
    // Moving FAs are built numerically; check the rest of the spec at rest.
    fluxlab::SolitonSpec at_rest = s;
    if (s.kind == fluxlab::SolitonKind::fa) at_rest.v = 0.0;
    at_rest.validate(model());
    return 0;
  });
  return s;
}

}  // namespace cli
