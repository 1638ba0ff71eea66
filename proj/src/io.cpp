#include "fluxlab/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <istream>
#include <ostream>
#include <sstream>

#include "fluxlab/error.hpp"
#include "fluxlab/simd.hpp"

namespace fluxlab::io {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);  // no "-0"
  return buf;
}

void write_field(std::ostream& os, const Grid& grid, const PairField& f) {
  f.validate(grid);
  os << "x,re_psi1,im_psi1,re_psi2,im_psi2\n";
  for (std::size_t i = 0; i < grid.n(); ++i)
    os << num(grid.x(i)) << ',' << num(f.psi1[i].real()) << ',' << num(f.psi1[i].imag()) << ','
       << num(f.psi2[i].real()) << ',' << num(f.psi2[i].imag()) << '\n';
}

PairField read_field(std::istream& is, std::vector<double>* xs) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("x,re_psi1", 0) != 0) throw DomainError("field CSV: missing header");
  PairField f;
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty()) continue;
    std::stringstream ss(line);
    double v[5];
    char comma;
    for (int c = 0; c < 5; ++c) {
      if (!(ss >> v[c]) || (c < 4 && !(ss >> comma)))
        throw DomainError("field CSV: malformed row " + std::to_string(row));
    }
    if (xs != nullptr) xs->push_back(v[0]);
    f.psi1.emplace_back(v[1], v[2]);
    f.psi2.emplace_back(v[3], v[4]);
  }
  return f;
}

void write_branch(std::ostream& os, const Branch& b) {
  os << "k,imag_amplitude,residual\n";
  for (const auto& p : b.points) os << num(p.k) << ',' << num(p.imag_amplitude) << ',' << num(p.residual) << '\n';
}

void write_spectrum(std::ostream& os, const Spectrum& s) {
  os << "re_lambda,im_lambda\n";
  for (const auto& l : s.eigenvalues) os << num(l.real()) << ',' << num(l.imag()) << '\n';
}

void write_sweep(std::ostream& os, const StabilitySweep& s) {
  os << "k,max_im,re_of_max\n";
  for (const auto& r : s.rows) os << num(r.k) << ',' << num(r.max_im) << ',' << num(r.re_of_max) << '\n';
}

void write_density_series(std::ostream& os, const Grid& grid, const std::vector<double>& times,
                          const std::vector<PairField>& frames, std::size_t x_stride) {
  if (x_stride == 0) x_stride = 1;
  os << "t,x,rho1,rho2\n";
  for (std::size_t f = 0; f < frames.size(); ++f)
    for (std::size_t i = 0; i < grid.n(); i += x_stride)
      os << num(times[f]) << ',' << num(grid.x(i)) << ',' << num(std::norm(frames[f].psi1[i])) << ','
         << num(std::norm(frames[f].psi2[i])) << '\n';
}

void write_diptrack(std::ostream& os, const DipTrack& tr) {
  os << "t,dip_index,x,depth\n";
  for (std::size_t f = 0; f < tr.times.size(); ++f)
    for (std::size_t d = 0; d < tr.n_dips; ++d)
      os << num(tr.times[f]) << ',' << d << ',' << num(tr.positions[f][d]) << ',' << num(tr.depths[f][d]) << '\n';
}

void write_trajectory(std::ostream& os, const ParticleTrajectory& tr) {
  const std::size_t n = tr.states.empty() ? 0 : tr.states.front().size();
  os << 't';
  for (std::size_t i = 1; i <= n; ++i) os << ",x_" << i;
  for (std::size_t i = 1; i <= n; ++i) os << ",v_" << i;
  os << '\n';
  for (std::size_t f = 0; f < tr.t.size(); ++f) {
    os << num(tr.t[f]);
    for (double x : tr.states[f].x) os << ',' << num(x);
    for (double v : tr.states[f].v) os << ',' << num(v);
    os << '\n';
  }
}

void write_frequencies(std::ostream& os, const std::vector<FrequencyRow>& rows) {
  os << "k,omega_in,omega_out,bdg_max_im\n";
  for (const auto& r : rows)
    os << num(r.k) << ',' << num(r.omega_in) << ',' << num(r.omega_out) << ',' << num(r.bdg_max_im) << '\n';
}

void write_manifest(std::ostream& os, const std::string& command, const std::map<std::string, std::string>& config,
                    const std::vector<std::string>& outputs) {
  os << "command = " << command << '\n';
  os << "fluxlab_version = 1.0.0\n";
  os << "kernels = " << simd::active().name << '\n';
  os << "\n[config]\n";
  for (const auto& [k, v] : config) os << k << " = " << v << '\n';
  os << "\n[outputs]\n";
  for (const auto& o : outputs) os << o << '\n';
}

void ensure_parent(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
}

}  // namespace fluxlab::io
