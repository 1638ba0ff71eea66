#include "fluxlab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <tuple>

#include "fluxlab/error.hpp"
#include "fluxlab/simd.hpp"

namespace fluxlab {

void EvolveSettings::validate() const {
  if (!(t_end > 0.0)) throw DomainError("t_end must be positive");
  if (!(cfl > 0.0)) throw DomainError("cfl must be positive");
  if (dt < 0.0) throw DomainError("dt must be positive when given");
  if (record_every < 0) throw DomainError("record_every must be non-negative");
  if (record_every == 0 && !(record_dt > 0.0)) throw DomainError("record_dt must be positive");
  if (noise < 0.0) throw DomainError("noise amplitude must be non-negative");
  if (!(drift_tol > 0.0)) throw DomainError("drift_tol must be positive");
}

int EvolveSettings::stride(const Grid& grid) const {
  if (record_every > 0) return record_every;
  return std::max(1, static_cast<int>(std::lround(record_dt / step(grid))));
}

namespace {

struct Workspace {
  PairField k1, k2, k3, k4, tmp;
  explicit Workspace(std::size_t n)
      : k1(PairField::zeros(n)), k2(PairField::zeros(n)), k3(PairField::zeros(n)), k4(PairField::zeros(n)),
        tmp(PairField::zeros(n)) {}
};

void axpy(const simd::Kernels& kr, PairField& out, const PairField& a, const PairField& b, double s) {
  kr.axpy(out.psi1.data(), a.psi1.data(), b.psi1.data(), s, a.psi1.size());
  kr.axpy(out.psi2.data(), a.psi2.data(), b.psi2.data(), s, a.psi2.size());
}

void step_rk4(PairField& y, double dt, std::span<const double> trap, const ModelParams& p, const Grid& g,
              Workspace& w) {
  const simd::Kernels& kr = simd::active();
  gpe_rhs_into(y, trap, p, g, w.k1);
  axpy(kr, w.tmp, y, w.k1, 0.5 * dt);
  gpe_rhs_into(w.tmp, trap, p, g, w.k2);
  axpy(kr, w.tmp, y, w.k2, 0.5 * dt);
  gpe_rhs_into(w.tmp, trap, p, g, w.k3);
  axpy(kr, w.tmp, y, w.k3, dt);
  gpe_rhs_into(w.tmp, trap, p, g, w.k4);
  axpy(kr, y, y, w.k1, dt / 6.0);
  axpy(kr, y, y, w.k2, dt / 3.0);
  axpy(kr, y, y, w.k3, dt / 3.0);
  axpy(kr, y, y, w.k4, dt / 6.0);
}

bool healthy(const PairField& s, double limit) {
  for (const auto* c : {&s.psi1, &s.psi2})
    for (const auto& z : *c)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || std::abs(z) > limit) return false;
  return true;
}

}  // namespace

void rk4_step(PairField& state, double dt, std::span<const double> trap, const ModelParams& params,
              const Grid& grid) {
  Workspace w(grid.n());
  step_rk4(state, dt, trap, params, grid, w);
}

void add_noise(PairField& state, double amplitude, std::uint64_t seed) {
  if (amplitude == 0.0) return;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, amplitude);
  for (auto* c : {&state.psi1, &state.psi2})
    for (auto& z : *c) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      z += cplx(re, im);
    }
}

EvolveResult evolve(const PairField& initial, const ModelParams& params, const Grid& grid,
                    const EvolveSettings& settings) {
  settings.validate();
  params.validate();
  initial.validate(grid);

  EvolveResult res;
  const double dt_nominal = settings.step(grid);
  const auto steps = static_cast<long>(std::ceil(settings.t_end / dt_nominal - 1e-9));
  const double dt = settings.t_end / static_cast<double>(steps);
  res.dt = dt;
  const int stride = settings.stride(grid);
  const RVec trap = trap_potential(grid, params);

  PairField y = initial;
  add_noise(y, settings.noise, settings.seed);
  const Observables o0 = observables(y, params, grid);
  const double limit = 1e3 * std::max(1.0, max_norm(y));
  const double bg = std::max(params.rho0 + std::abs(params.k), 1e-12);
  const double edge0 = std::norm(y.psi1.front()) + std::norm(y.psi1.back());

  auto record = [&](double t) {
    const Observables o = observables(y, params, grid);
    res.norm_drift = std::max(res.norm_drift, std::abs(o.norm - o0.norm) / std::abs(o0.norm));
    res.energy_drift = std::max(res.energy_drift, std::abs(o.energy - o0.energy) / std::max(std::abs(o0.energy), 1e-300));
    const double edge = std::norm(y.psi1.front()) + std::norm(y.psi1.back());
    if (std::abs(edge - edge0) > 1e-3 * bg) res.boundary_flag = true;
    res.times.push_back(t);
    res.frames.push_back(y);
  };

  record(0.0);
  Workspace w(grid.n());
  for (long s = 1; s <= steps; ++s) {
    step_rk4(y, dt, trap, params, grid, w);
    if (s % stride == 0 || s == steps) {
      if (!healthy(y, limit)) {
        res.aborted = true;
        res.diagnostic = "state became non-finite or exploded near t=" + std::to_string(s * dt);
        break;
      }
      record(static_cast<double>(s) * dt);
    }
  }
  res.drift_flag = res.norm_drift > settings.drift_tol || res.energy_drift > settings.drift_tol;
  return res;
}

std::vector<Dip> find_dips(std::span<const double> rho, const Grid& grid, double min_prominence) {
  std::vector<Dip> dips;
  const std::size_t n = rho.size();
  if (n != grid.n()) throw DomainError("find_dips: density length does not match the grid");
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!(rho[i] < rho[i - 1] && rho[i] <= rho[i + 1])) continue;
    double left = rho[i];
    for (std::size_t j = i; j-- > 0;) {
      if (rho[j] < rho[i]) break;
      left = std::max(left, rho[j]);
    }
    double right = rho[i];
    for (std::size_t j = i + 1; j < n; ++j) {
      if (rho[j] < rho[i]) break;
      right = std::max(right, rho[j]);
    }
    const double prom = std::min(left, right) - rho[i];
    if (prom < min_prominence) continue;
    const double a = rho[i - 1], b = rho[i], c = rho[i + 1];
    const double curv = a - 2.0 * b + c;
    double shift = 0.0, depth = b;
    if (curv > 0.0) {
      shift = std::clamp(0.5 * (a - c) / curv, -0.5, 0.5);
      depth = b - 0.125 * (c - a) * (c - a) / curv;
    }
    dips.push_back({grid.x(i) + shift * grid.dx(), depth, prom});
  }
  return dips;
}

double DipTrack::separation(std::size_t f) const {
  if (n_dips < 2) return std::numeric_limits<double>::quiet_NaN();
  return positions[f][1] - positions[f][0];
}

DipTrack track_dips(const std::vector<double>& times, const std::vector<PairField>& frames, const Grid& grid,
                    std::size_t n_dips, const TrackSettings& st) {
  if (frames.empty() || frames.size() != times.size()) throw DomainError("track_dips needs a nonempty series");
  if (n_dips == 0) throw DomainError("track_dips needs n_dips >= 1");
  const double nan = std::numeric_limits<double>::quiet_NaN();
  DipTrack tr;
  tr.n_dips = n_dips;
  tr.times = times;
  const double max_jump = st.max_jump * grid.dx();
  bool suspended = true;  // no association yet

  RVec rho(grid.n());
  for (std::size_t f = 0; f < frames.size(); ++f) {
    const CVec& psi = st.component == 2 ? frames[f].psi2 : frames[f].psi1;
    double top = 0.0;
    for (std::size_t i = 0; i < grid.n(); ++i) {
      rho[i] = std::norm(psi[i]);
      top = std::max(top, rho[i]);
    }
    std::vector<Dip> all = find_dips(rho, grid, st.min_prominence * top);
    tr.counts.push_back(all.size());
    // keep the n_dips deepest, in x order
    std::vector<Dip> cand = all;
    std::sort(cand.begin(), cand.end(), [](const Dip& a, const Dip& b) { return a.depth < b.depth; });
    if (cand.size() > n_dips) cand.resize(n_dips);
    std::sort(cand.begin(), cand.end(), [](const Dip& a, const Dip& b) { return a.x < b.x; });
    bool merged = cand.size() < n_dips;
    for (std::size_t d = 1; d < cand.size(); ++d)
      if (cand[d].x - cand[d - 1].x < 2.0 * grid.dx()) merged = true;

    std::vector<double> pos(n_dips, nan), dep(n_dips, nan);
    if (merged) {
      if (f > 0 && !suspended) tr.events.push_back({TopologyEvent::Kind::merge, times[f], cand.size()});
      suspended = true;
    } else if (suspended) {
      if (f > 0) tr.events.push_back({TopologyEvent::Kind::split, times[f], cand.size()});
      for (std::size_t d = 0; d < n_dips; ++d) {
        pos[d] = cand[d].x;
        dep[d] = cand[d].depth;
      }
      suspended = false;
    } else {
      // greedy nearest-neighbour association, closest pairs first
      const auto& prev = tr.positions.back();
      std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
      for (std::size_t d = 0; d < n_dips; ++d)
        for (std::size_t c = 0; c < cand.size(); ++c) pairs.emplace_back(std::abs(cand[c].x - prev[d]), d, c);
      std::sort(pairs.begin(), pairs.end());
      std::vector<bool> used_d(n_dips, false), used_c(cand.size(), false);
      for (const auto& [dist, d, c] : pairs) {
        if (used_d[d] || used_c[c] || dist > max_jump) continue;
        used_d[d] = used_c[c] = true;
        pos[d] = cand[c].x;
        dep[d] = cand[c].depth;
      }
      if (std::find(used_d.begin(), used_d.end(), false) != used_d.end()) {
        // lost track of a dip: start over from x order next frame
        suspended = true;
        std::fill(pos.begin(), pos.end(), nan);
        std::fill(dep.begin(), dep.end(), nan);
      }
    }
    tr.positions.push_back(std::move(pos));
    tr.depths.push_back(std::move(dep));
  }
  return tr;
}

double dip_velocity(const DipTrack& tr, std::size_t dip, double t0, double t1) {
  double st = 0, sx = 0, stt = 0, stx = 0;
  int m = 0;
  for (std::size_t f = 0; f < tr.times.size(); ++f) {
    const double t = tr.times[f];
    const double x = tr.positions[f][dip];
    if (t < t0 || t > t1 || !std::isfinite(x)) continue;
    st += t;
    sx += x;
    stt += t * t;
    stx += t * x;
    ++m;
  }
  if (m < 2) return std::numeric_limits<double>::quiet_NaN();
  const double den = m * stt - st * st;
  return den > 0.0 ? (m * stx - st * sx) / den : std::numeric_limits<double>::quiet_NaN();
}

std::optional<double> departure_time(const DipTrack& tr, double depth_tol, double sep_tol) {
  if (tr.times.empty()) return std::nullopt;
  const auto& d0 = tr.depths.front();
  const double s0 = tr.separation(0);
  for (std::size_t f = 0; f < tr.times.size(); ++f) {
    for (std::size_t d = 0; d < tr.n_dips; ++d) {
      const double x = tr.positions[f][d];
      if (!std::isfinite(x) || std::abs(tr.depths[f][d] - d0[d]) > depth_tol) return tr.times[f];
    }
    if (tr.n_dips >= 2 && std::abs(tr.separation(f) - s0) > sep_tol) return tr.times[f];
  }
  return std::nullopt;
}

}  // namespace fluxlab
