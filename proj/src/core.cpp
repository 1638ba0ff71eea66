#include "fluxlab/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fluxlab/error.hpp"
#include "fluxlab/simd.hpp"

namespace fluxlab {

void ModelParams::validate() const {
  if (!std::isfinite(rho0) || !std::isfinite(k) || !std::isfinite(omega))
    throw DomainError("model parameters must be finite");
  if (rho0 <= 0.0) throw DomainError("rho0 must be positive");
  if (omega < 0.0) throw DomainError("trap strength omega must be non-negative");
}

void ModelParams::require_dark_background() const {
  validate();
  if (k <= -rho0) throw DomainError("a dark-soliton background requires k > -rho0");
}

double ModelParams::background() const { return std::sqrt(rho0 + k); }

Grid::Grid(double x_min, double x_max, std::size_t n, Stencil stencil, double max_dx)
    : x_min_(x_min), x_max_(x_max), n_(n), dx_(0.0), stencil_(stencil) {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_max > x_min))
    throw DomainError("grid requires finite x_min < x_max");
  if (n < 8) throw DomainError("grid requires at least 8 points");
  dx_ = (x_max - x_min) / static_cast<double>(n - 1);
  if (dx_ > max_dx * (1.0 + 1e-12))
    throw DomainError("grid spacing " + std::to_string(dx_) + " exceeds the limit " +
                      std::to_string(max_dx));
}

Grid Grid::with_spacing(double x_min, double x_max, double dx, Stencil stencil, double max_dx) {
  if (!(dx > 0.0)) throw DomainError("grid spacing must be positive");
  const double intervals = std::ceil((x_max - x_min) / dx - 1e-9);
  return Grid(x_min, x_max, static_cast<std::size_t>(intervals) + 1, stencil, max_dx);
}

RVec Grid::coordinates() const {
  RVec xs(n_);
  for (std::size_t i = 0; i < n_; ++i) xs[i] = x(i);
  return xs;
}

RVec Grid::weights() const {
  RVec w(n_, dx_);
  w.front() = w.back() = 0.5 * dx_;
  return w;
}

std::size_t Grid::mirror(std::ptrdiff_t i) const {
  const auto last = static_cast<std::ptrdiff_t>(n_) - 1;
  if (i < 0) i = -i;
  if (i > last) i = 2 * last - i;
  return static_cast<std::size_t>(i);
}

std::size_t Grid::nearest(double xv) const {
  const double s = std::round((xv - x_min_) / dx_);
  if (s <= 0.0) return 0;
  return std::min(n_ - 1, static_cast<std::size_t>(s));
}

PairField PairField::zeros(std::size_t n) { return PairField{CVec(n), CVec(n)}; }

void PairField::validate(const Grid& grid) const {
  if (psi1.size() != grid.n() || psi2.size() != grid.n())
    throw DomainError("field length does not match the grid");
  auto finite = [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); };
  if (!std::all_of(psi1.begin(), psi1.end(), finite) || !std::all_of(psi2.begin(), psi2.end(), finite))
    throw DomainError("field contains non-finite values");
}

RVec trap_potential(const Grid& grid, const ModelParams& params) {
  RVec v(grid.n());
  const double c = 0.5 * params.omega * params.omega;
  for (std::size_t i = 0; i < grid.n(); ++i) v[i] = c * grid.x(i) * grid.x(i);
  return v;
}

namespace {

cplx boundary_second_derivative(std::span<const cplx> f, std::size_t i, const Grid& g) {
  const double inv = 1.0 / (g.dx() * g.dx());
  const auto ii = static_cast<std::ptrdiff_t>(i);
  auto at = [&](std::ptrdiff_t j) { return f[g.mirror(j)]; };
  if (g.stencil() == Stencil::five_point) {
    return inv * ((-30.0 * at(ii) + 16.0 * (at(ii - 1) + at(ii + 1)) - (at(ii - 2) + at(ii + 2))) / 12.0);
  }
  return inv * (at(ii - 1) - 2.0 * at(ii) + at(ii + 1));
}

template <class F>
void for_each_boundary_point(const Grid& g, F&& fn) {
  const std::size_t h = g.halo();
  for (std::size_t i = 0; i < h; ++i) fn(i);
  for (std::size_t i = g.n() - h; i < g.n(); ++i) fn(i);
}

void rhs_component(std::span<const cplx> self, std::span<const cplx> other,
                   std::span<const double> trap, const ModelParams& p, const Grid& g,
                   std::span<cplx> out) {
  const simd::RhsCoeffs c{1.0 / (g.dx() * g.dx()), p.rho0, p.k};
  simd::active().gpe_rhs(self.data(), other.data(), trap.data(), out.data(), g.halo(),
                         g.n() - g.halo(), g.order(), c);
  for_each_boundary_point(g, [&](std::size_t i) {
    const cplx h = -0.5 * boundary_second_derivative(self, i, g) +
                   (std::norm(self[i]) - p.rho0 + trap[i]) * self[i] - p.k * other[i];
    out[i] = cplx(h.imag(), -h.real());
  });
}

}  // namespace

CVec laplacian(std::span<const cplx> field, const Grid& grid) {
  if (field.size() != grid.n()) throw DomainError("laplacian: field length does not match the grid");
  CVec out(grid.n());
  simd::active().laplacian(field.data(), out.data(), grid.halo(), grid.n() - grid.halo(),
                           grid.order(), 1.0 / (grid.dx() * grid.dx()));
  for_each_boundary_point(grid, [&](std::size_t i) { out[i] = boundary_second_derivative(field, i, grid); });
  return out;
}

void gpe_rhs_into(const PairField& state, std::span<const double> trap, const ModelParams& params,
                  const Grid& grid, PairField& out) {
  rhs_component(state.psi1, state.psi2, trap, params, grid, out.psi1);
  rhs_component(state.psi2, state.psi1, trap, params, grid, out.psi2);
}

PairField gpe_rhs(const PairField& state, const ModelParams& params, const Grid& grid) {
  params.validate();
  state.validate(grid);
  const RVec trap = trap_potential(grid, params);
  PairField out = PairField::zeros(grid.n());
  gpe_rhs_into(state, trap, params, grid, out);
  return out;
}

PairField stationary_operator(const PairField& state, const ModelParams& params, const Grid& grid) {
  PairField out = gpe_rhs(state, params, grid);
  // d/dt psi = -i H psi  =>  H psi = i d/dt psi
  for (auto* comp : {&out.psi1, &out.psi2})
    for (auto& z : *comp) z = cplx(-z.imag(), z.real());
  return out;
}

double max_norm(const PairField& field) {
  double m = 0.0;
  for (const auto& z : field.psi1) m = std::max(m, std::abs(z));
  for (const auto& z : field.psi2) m = std::max(m, std::abs(z));
  return m;
}

double stationary_residual(const PairField& state, const ModelParams& params, const Grid& grid) {
  return max_norm(gpe_rhs(state, params, grid));
}

double phase_winding(std::span<const cplx> field, std::size_t* skipped) {
  constexpr double floor = 1e-12;
  double total = 0.0;
  std::size_t skip = 0;
  const cplx* prev = nullptr;
  for (const auto& z : field) {
    if (std::abs(z) < floor) {
      ++skip;
      continue;
    }
    if (prev != nullptr) {
      double d = std::arg(z * std::conj(*prev));
      if (d <= -std::numbers::pi) d += 2.0 * std::numbers::pi;  // keep increments in (-pi, pi]
      total += d;
    }
    prev = &z;
  }
  if (skipped != nullptr) *skipped = skip;
  return total;
}

Observables observables(const PairField& state, const ModelParams& params, const Grid& grid) {
  params.validate();
  state.validate(grid);
  const RVec w = grid.weights();
  const RVec trap = trap_potential(grid, params);
  const CVec lap1 = laplacian(state.psi1, grid);
  const CVec lap2 = laplacian(state.psi2, grid);

  Observables obs;
  for (std::size_t i = 0; i < grid.n(); ++i) {
    const cplx a = state.psi1[i];
    const cplx b = state.psi2[i];
    const double na = std::norm(a);
    const double nb = std::norm(b);
    obs.norm += w[i] * (na + nb);
    const double kinetic = -0.5 * (std::conj(a) * lap1[i] + std::conj(b) * lap2[i]).real();
    const double local = 0.5 * (na * na + nb * nb) + (trap[i] - params.rho0) * (na + nb);
    const double coupling = -2.0 * params.k * (std::conj(a) * b).real();
    obs.energy += w[i] * (kinetic + local + coupling);
  }

  std::size_t s1 = 0, s2 = 0, s12 = 0;
  obs.winding1 = phase_winding(state.psi1, &s1);
  obs.winding2 = phase_winding(state.psi2, &s2);
  CVec rel(grid.n());
  for (std::size_t i = 0; i < grid.n(); ++i) {
    // |psi1 psi2| < 1e-12 exactly when the relative phase is undefined
    const bool undefined = std::abs(state.psi1[i]) < 1e-12 || std::abs(state.psi2[i]) < 1e-12;
    rel[i] = undefined ? cplx(0.0) : state.psi2[i] * std::conj(state.psi1[i]) /
                                         (std::abs(state.psi1[i]) * std::abs(state.psi2[i]));
  }
  obs.relative_winding = phase_winding(rel, &s12);
  obs.skipped_points = std::max({s1, s2, s12});
  return obs;
}

}  // namespace fluxlab
