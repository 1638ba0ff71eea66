#pragma once

// Flat key = value configuration with [section] headers. Every key has a
// declared default; files and flags may only set declared keys.

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "fluxlab/ansatz.hpp"
#include "fluxlab/core.hpp"
#include "fluxlab/dynamics.hpp"
#include "fluxlab/spectrum.hpp"
#include "fluxlab/stationary.hpp"

namespace cli {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Key {
  std::string name;   ///< section.key
  std::string value;  ///< default
  std::string help;
  std::string alias;  ///< extra flag name, e.g. "--k"
  bool is_flag = false;
};

/// The keys understood by a subcommand, with that command's defaults.
std::vector<Key> keys_for(const std::string& command);

class Config {
 public:
  explicit Config(const std::vector<Key>& keys);

  void load_file(const std::string& path);
  void set(const std::string& key, const std::string& value);

  const std::map<std::string, std::string>& values() const { return values_; }

  std::string str(const std::string& key) const;
  double num(const std::string& key) const;
  int integer(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::vector<double> list(const std::string& key) const;
  std::string choice(const std::string& key, const std::vector<std::string>& allowed) const;

  fluxlab::ModelParams model() const;
  fluxlab::Grid grid() const;
  fluxlab::NewtonSettings newton() const;
  fluxlab::EvolveSettings evolve() const;
  fluxlab::SpectrumOptions spectrum() const;
  fluxlab::Parity parity(const std::string& key) const;
  fluxlab::SolitonSpec soliton(const std::string& section) const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace cli
