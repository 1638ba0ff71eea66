#pragma once

#include <string>
#include <vector>

#include "config.hpp"
#include "fluxlab/dynamics.hpp"
#include "fluxlab/svg.hpp"

namespace cli {

/// Collects the files written by one command and writes its manifest.
class Output {
 public:
  Output(std::string dir, bool svg) : dir_(std::move(dir)), svg_(svg) {}

  /// Open dir/name for writing, creating directories as needed.
  template <class F>
  void write(const std::string& name, F&& fill);
  void plot(const std::string& name, const std::string& svg);
  void manifest(const std::string& command, const std::map<std::string, std::string>& config);
  /// The same collector rooted at dir/sub (files are still listed here).
  Output sub(const std::string& sub) const;
  const std::string& dir() const { return dir_; }
  const std::vector<std::string>& files() const { return files_; }
  void adopt(const Output& child);

 private:
  std::string open(const std::string& name);
  std::string dir_;
  bool svg_;
  std::vector<std::string> files_;
};

/// Space-time map of |psi1|^2 with the tracked dips overlaid.
std::string density_map(const fluxlab::Grid& grid, const std::vector<double>& times,
                        const std::vector<fluxlab::PairField>& frames, const fluxlab::DipTrack& track,
                        const std::string& title, const std::vector<fluxlab::svg::Series>& extra = {});

/// Re/Im of both components against x.
std::string field_plot(const fluxlab::Grid& grid, const fluxlab::PairField& f, const std::string& title);

/// Write density, dip track, outcome summary and map of a collision run.
void write_collision(Output& out, const fluxlab::Grid& grid, const fluxlab::CollisionReport& r, int x_stride,
                     const std::string& title, const std::vector<fluxlab::svg::Series>& extra = {});

int run_command(const std::string& command, const Config& config);
int run_figure(const std::string& id, const std::string& out_dir, bool svg);

/// Figure identifiers understood by run_figure.
std::vector<std::string> figure_ids();

}  // namespace cli

#include <fstream>

template <class F>
void cli::Output::write(const std::string& name, F&& fill) {
  std::ofstream os(open(name), std::ios::binary);
  fill(os);
}
