#include "fluxlab/ansatz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fluxlab/error.hpp"

namespace fluxlab {

namespace {

constexpr double fa_edge_slack = 1e-12;

void check_sign(int s, const char* name) {
  if (s != 1 && s != -1) throw DomainError(std::string(name) + " must be +1 or -1");
}

void check_fa_domain(const ModelParams& p) {
  p.validate();
  if (!(p.k > 0.0) || p.k > p.rho0 / 3.0 + fa_edge_slack)
    throw DomainError("an FA exists only for 0 < k < rho0/3");
}

}  // namespace

void SolitonSpec::validate(const ModelParams& params) const {
  check_sign(sign_re, "sign_re");
  check_sign(sign_im, "sign_im");
  if (!std::isfinite(x0) || !std::isfinite(v)) throw DomainError("soliton spec must be finite");
  switch (kind) {
    case SolitonKind::fa:
      check_fa_domain(params);
      if (v != 0.0) throw DomainError("moving FAs have no closed form; use newton_travelling");
      break;
    case SolitonKind::dark:
      params.require_dark_background();
      break;
    case SolitonKind::travelling_dark:
      params.require_dark_background();
      if (!(std::abs(v) < 1.0)) throw DomainError("travelling dark soliton needs |v| < 1");
      break;
  }
}

PairField fa_profile(const Grid& grid, const ModelParams& params, int sign_re, int sign_im,
                     double x0) {
  check_fa_domain(params);
  check_sign(sign_re, "sign_re");
  check_sign(sign_im, "sign_im");
  const double re_amp = sign_re * std::sqrt(params.rho0 + params.k);
  const double im_amp = sign_im * std::sqrt(std::max(params.rho0 - 3.0 * params.k, 0.0));
  const double width = 2.0 * std::sqrt(params.k);
  PairField f = PairField::zeros(grid.n());
  for (std::size_t i = 0; i < grid.n(); ++i) {
    const double s = width * (grid.x(i) - x0);
    const cplx z(re_amp * std::tanh(s), im_amp / std::cosh(s));
    f.psi1[i] = z;
    f.psi2[i] = std::conj(z);
  }
  return f;
}

PairField dark_profile(const Grid& grid, const ModelParams& params, double x0, int sign) {
  params.require_dark_background();
  check_sign(sign, "sign");
  const double b = params.background();
  PairField f = PairField::zeros(grid.n());
  for (std::size_t i = 0; i < grid.n(); ++i) f.psi1[i] = f.psi2[i] = sign * b * std::tanh(b * (grid.x(i) - x0));
  return f;
}

CVec travelling_dark(const Grid& grid, double rho0, double v, double x0) {
  if (!(rho0 > 0.0)) throw DomainError("rho0 must be positive");
  if (!(std::abs(v) <= 1.0)) throw DomainError("the soliton depth is undefined for |v| > 1");
  const double s = std::sqrt(rho0);
  const double a = std::sqrt(1.0 - v * v);
  CVec psi(grid.n());
  for (std::size_t i = 0; i < grid.n(); ++i)
    psi[i] = s * cplx(a * std::tanh(s * a * (grid.x(i) - s * x0)), v);
  return psi;
}

CVec two_soliton_exact(const Grid& grid, double t, double rho0, double rho_min) {
  if (!(rho0 > 0.0)) throw DomainError("rho0 must be positive");
  if (!(rho_min > 0.0 && rho_min < rho0)) throw DomainError("two_soliton_exact needs 0 < rho_min < rho0");
  const double q = 2.0 * std::sqrt(rho_min * (rho0 - rho_min));
  const double p = 2.0 * std::sqrt(rho0 - rho_min);
  const double sr0 = std::sqrt(rho0);
  const double srm = std::sqrt(rho_min);
  CVec psi(grid.n());
  // Divide through by cosh(qt) so large |t| does not overflow.
  const double th = std::tanh(q * t);
  const double lcq = std::abs(q * t) + std::log1p(std::exp(-2.0 * std::abs(q * t))) - std::log(2.0);
  for (std::size_t i = 0; i < grid.n(); ++i) {
    const double px = std::abs(p * grid.x(i));
    const double lcp = px + std::log1p(std::exp(-2.0 * px)) - std::log(2.0);
    const double r = std::exp(lcp - lcq);  // cosh(px) / cosh(qt)
    const cplx num((2.0 * rho0 - 4.0 * rho_min) - 2.0 * std::sqrt(rho0 * rho_min) * r, -2.0 * q * th);
    psi[i] = num / (2.0 * sr0 + 2.0 * srm * r);
  }
  return psi;
}

Constituent constituent(const SolitonSpec& s, const ModelParams& p, const Grid& g) {
  s.validate(p);
  switch (s.kind) {
    case SolitonKind::fa:
      return {fa_profile(g, p, s.sign_re, s.sign_im, s.x0), s.x0, true};
    case SolitonKind::dark:
      return {dark_profile(g, p, s.x0, s.sign_re), s.x0, false};
    case SolitonKind::travelling_dark: {
      const double rho = p.rho0 + p.k;
      CVec psi = travelling_dark(g, rho, s.v, s.x0 / std::sqrt(rho));
      if (s.sign_re < 0)
        for (auto& z : psi) z = cplx(-z.real(), z.imag());
      PairField f{psi, psi};
      return {std::move(f), s.x0, false};
    }
  }
  throw DomainError("unknown soliton kind");
}

SpliceResult splice_fields(std::span<const Constituent> parts, const ModelParams& params,
                           const Grid& grid, Parity parity) {
  params.validate();
  if (parts.empty()) throw DomainError("splice needs at least one constituent");
  const double bg = params.background();
  if (!(bg > 0.0)) throw DomainError("splice needs a positive background rho0 + k");

  SpliceResult out;
  out.field = PairField{CVec(grid.n(), cplx(bg)), CVec(grid.n(), cplx(bg))};
  out.min_separation = std::numeric_limits<double>::infinity();
  std::size_t fa_count = 0;
  for (std::size_t c = 0; c < parts.size(); ++c) {
    parts[c].field.validate(grid);
    const bool swap = parts[c].is_fa && parity == Parity::even && (fa_count++ % 2 == 1);
    const CVec& a = swap ? parts[c].field.psi2 : parts[c].field.psi1;
    const CVec& b = swap ? parts[c].field.psi1 : parts[c].field.psi2;
    for (std::size_t i = 0; i < grid.n(); ++i) {
      out.field.psi1[i] *= a[i] / bg;
      out.field.psi2[i] *= b[i] / bg;
    }
    for (std::size_t d = 0; d < c; ++d)
      out.min_separation = std::min(out.min_separation, std::abs(parts[c].x0 - parts[d].x0));
  }
  out.overlap_warning = out.min_separation < 5.0 / bg;
  return out;
}

SpliceResult splice(std::span<const SolitonSpec> specs, const ModelParams& params, const Grid& grid,
                    Parity parity) {
  std::vector<Constituent> parts;
  parts.reserve(specs.size());
  for (const auto& s : specs) parts.push_back(constituent(s, params, grid));
  return splice_fields(parts, params, grid, parity);
}

RVec thomas_fermi_envelope(const Grid& grid, const ModelParams& params) {
  params.validate();
  const RVec v = trap_potential(grid, params);
  RVec env(grid.n());
  for (std::size_t i = 0; i < grid.n(); ++i) env[i] = std::sqrt(std::max(params.rho0 - v[i], 0.0) / params.rho0);
  return env;
}

PairField trapped_guess(std::span<const SolitonSpec> specs, const ModelParams& params, const Grid& grid,
                        Parity parity) {
  PairField f = splice(specs, params, grid, parity).field;
  const RVec env = thomas_fermi_envelope(grid, params);
  for (std::size_t i = 0; i < grid.n(); ++i) {
    f.psi1[i] *= env[i];
    f.psi2[i] *= env[i];
  }
  return f;
}

std::vector<SolitonSpec> fa_pair(double half_separation) {
  return {SolitonSpec{SolitonKind::fa, -half_separation, 0.0, 1, 1},
          SolitonSpec{SolitonKind::fa, half_separation, 0.0, 1, 1}};
}

}  // namespace fluxlab
