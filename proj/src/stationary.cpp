#include "fluxlab/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "fluxlab/ansatz.hpp"
#include "fluxlab/banded.hpp"
#include "fluxlab/error.hpp"

namespace fluxlab {

void NewtonSettings::validate() const {
  if (!(tol > 0.0)) throw DomainError("newton tol must be positive");
  if (max_iter < 1) throw DomainError("newton max_iter must be at least 1");
  if (!(max_step > 0.0)) throw DomainError("newton max_step must be positive");
}

namespace {

struct Tap {
  int offset;
  double coef;
};

std::vector<Tap> second_derivative_taps(const Grid& g) {
  const double s = 1.0 / (g.dx() * g.dx());
  if (g.stencil() == Stencil::five_point)
    return {{-2, -s / 12}, {-1, 16 * s / 12}, {0, -30 * s / 12}, {1, 16 * s / 12}, {2, -s / 12}};
  return {{-1, s}, {0, -2 * s}, {1, s}};
}

std::vector<Tap> first_derivative_taps(const Grid& g) {
  const double s = 1.0 / g.dx();
  if (g.stencil() == Stencil::five_point) return {{-2, s / 12}, {-1, -8 * s / 12}, {1, 8 * s / 12}, {2, -s / 12}};
  return {{-1, -0.5 * s}, {1, 0.5 * s}};
}

CVec first_derivative(const CVec& f, const Grid& g) {
  const auto taps = first_derivative_taps(g);
  CVec d(g.n());
  for (std::size_t i = 0; i < g.n(); ++i) {
    cplx acc = 0.0;
    for (const auto& t : taps) acc += t.coef * f[g.mirror(static_cast<std::ptrdiff_t>(i) + t.offset)];
    d[i] = acc;
  }
  return d;
}

// Residual of the (co-moving) stationary equations for the full pair.
PairField full_residual(const PairField& s, double v, const ModelParams& p, const Grid& g) {
  PairField r = stationary_operator(s, p, g);
  if (v != 0.0) {
    const CVec d1 = first_derivative(s.psi1, g);
    const CVec d2 = first_derivative(s.psi2, g);
    for (std::size_t i = 0; i < g.n(); ++i) {
      r.psi1[i] += cplx(0.0, v) * d1[i];
      r.psi2[i] += cplx(0.0, v) * d2[i];
    }
  }
  return r;
}

struct Problem {
  const ModelParams& p;
  const Grid& g;
  double v;
  bool conjugate;
  int per_point() const { return conjugate ? 2 : 4; }
  std::size_t size() const { return g.n() * static_cast<std::size_t>(per_point()); }
};

std::vector<double> pack(const PairField& s, const Problem& pr) {
  std::vector<double> x(pr.size());
  for (std::size_t i = 0; i < pr.g.n(); ++i) {
    if (pr.conjugate) {
      x[2 * i] = s.psi1[i].real();
      x[2 * i + 1] = s.psi1[i].imag();
    } else {
      x[4 * i] = s.psi1[i].real();
      x[4 * i + 1] = s.psi1[i].imag();
      x[4 * i + 2] = s.psi2[i].real();
      x[4 * i + 3] = s.psi2[i].imag();
    }
  }
  return x;
}

PairField unpack(const std::vector<double>& x, const Problem& pr) {
  PairField s = PairField::zeros(pr.g.n());
  for (std::size_t i = 0; i < pr.g.n(); ++i) {
    if (pr.conjugate) {
      s.psi1[i] = cplx(x[2 * i], x[2 * i + 1]);
      s.psi2[i] = std::conj(s.psi1[i]);
    } else {
      s.psi1[i] = cplx(x[4 * i], x[4 * i + 1]);
      s.psi2[i] = cplx(x[4 * i + 2], x[4 * i + 3]);
    }
  }
  return s;
}

BandMatrix jacobian(const PairField& s, const RVec& trap, const Problem& pr) {
  const Grid& g = pr.g;
  const int m = pr.per_point();
  const int bw = m * static_cast<int>(g.halo()) + m - 1;
  BandMatrix J(pr.size(), bw, bw);
  const auto lap = second_derivative_taps(g);
  const auto der = first_derivative_taps(g);
  const double rho0 = pr.p.rho0;
  const double k = pr.p.k;
  const int comps = pr.conjugate ? 1 : 2;

  for (std::size_t i = 0; i < g.n(); ++i) {
    for (int c = 0; c < comps; ++c) {
      const cplx z = c == 0 ? s.psi1[i] : s.psi2[i];
      const double u = z.real(), w = z.imag();
      const std::size_t ru = m * i + 2 * c, rw = ru + 1;
      for (const auto& t : lap) {
        const std::size_t j = g.mirror(static_cast<std::ptrdiff_t>(i) + t.offset);
        J(ru, m * j + 2 * c) += -0.5 * t.coef;
        J(rw, m * j + 2 * c + 1) += -0.5 * t.coef;
      }
      if (pr.v != 0.0) {
        for (const auto& t : der) {
          const std::size_t j = g.mirror(static_cast<std::ptrdiff_t>(i) + t.offset);
          J(ru, m * j + 2 * c + 1) += -pr.v * t.coef;
          J(rw, m * j + 2 * c) += pr.v * t.coef;
        }
      }
      const double base = trap[i] - rho0;
      J(ru, ru) += 3 * u * u + w * w + base;
      J(ru, rw) += 2 * u * w;
      J(rw, ru) += 2 * u * w;
      J(rw, rw) += u * u + 3 * w * w + base;
      if (pr.conjugate) {
        // -k conj(psi1): -k on the real part, +k on the imaginary part
        J(ru, ru) += -k;
        J(rw, rw) += k;
      } else {
        const std::size_t ou = m * i + 2 * (1 - c);
        J(ru, ou) += -k;
        J(rw, ou + 1) += -k;
      }
    }
  }
  return J;
}

std::vector<double> pack_residual(const PairField& r, const Problem& pr) { return pack(r, pr); }

// Unknowns to hold fixed, one per continuous symmetry of the discrete problem.
std::vector<std::size_t> pinned_unknowns(const PairField& s, const Problem& pr, bool travelling) {
  const Grid& g = pr.g;
  const int m = pr.per_point();
  std::vector<std::size_t> pins;

  auto argmax_abs = [&](const CVec& f) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < f.size(); ++i)
      if (std::abs(f[i]) > std::abs(f[best]) * (1.0 + 1e-12)) best = i;
    return best;
  };

  // Global phase: a symmetry whenever psi2 is not tied to conj(psi1); with
  // k = 0 each component carries its own phase.
  const bool phase1 = !pr.conjugate || pr.p.k == 0.0;
  if (phase1) pins.push_back(travelling ? 1 : m * argmax_abs(s.psi1) + 1);
  if (!pr.conjugate && pr.p.k == 0.0) pins.push_back(m * argmax_abs(s.psi2) + 3);

  // Translation, without a trap: fix the unknown with the steepest slope.
  if (pr.p.omega == 0.0) {
    const CVec d = first_derivative(s.psi1, g);
    double best = 0.0;
    std::size_t at = 0;
    for (std::size_t i = 0; i < g.n(); ++i) {
      for (int part = 0; part < 2; ++part) {
        const double val = std::abs(part == 0 ? d[i].real() : d[i].imag());
        const std::size_t idx = m * i + part;
        if (val > best && std::find(pins.begin(), pins.end(), idx) == pins.end()) {
          best = val;
          at = idx;
        }
      }
    }
    if (best > 1e-3 * pr.p.background()) pins.push_back(at);
  }
  return pins;
}

PairField solve(const PairField& guess, const Problem& pr, const NewtonSettings& st, bool travelling,
                NewtonReport* report) {
  st.validate();
  pr.p.validate();
  guess.validate(pr.g);
  const RVec trap = trap_potential(pr.g, pr.p);

  std::vector<double> x = pack(guess, pr);
  if (pr.conjugate) x = pack(unpack(x, pr), pr);
  PairField state = unpack(x, pr);
  const auto pins = pinned_unknowns(state, pr, travelling);

  NewtonReport rep;
  for (int it = 0;; ++it) {
    const PairField r = full_residual(state, pr.v, pr.p, pr.g);
    const double res = max_norm(r);
    rep.history.push_back(res);
    rep.iterations = it;
    rep.residual = res;
    if (report != nullptr) *report = rep;
    if (!std::isfinite(res)) throw ConvergenceError("newton: residual is not finite", it, res);
    if (res <= st.tol) break;
    if (it >= st.max_iter)
      throw ConvergenceError("newton: no convergence after " + std::to_string(it) + " iterations (residual " +
                                 std::to_string(res) + ")",
                             it, res);
    BandMatrix J = jacobian(state, trap, pr);
    std::vector<double> rhs = pack_residual(r, pr);
    for (auto& e : rhs) e = -e;
    for (std::size_t idx : pins) {
      J.set_unit_row(idx);
      rhs[idx] = 0.0;
    }
    double rc = 1.0;
    std::vector<double> dx = J.solve(rhs, &rc);
    rep.min_rcond = std::min(rep.min_rcond, rc);
    double step = 0.0;
    for (double d : dx) step = std::max(step, std::abs(d));
    const double scale = step > st.max_step ? st.max_step / step : 1.0;
    for (std::size_t q = 0; q < x.size(); ++q) x[q] += scale * dx[q];
    state = unpack(x, pr);
  }
  if (report != nullptr) *report = rep;
  return state;
}

}  // namespace

PairField newton_stationary(const PairField& guess, const ModelParams& params, const Grid& grid,
                            const NewtonSettings& settings, NewtonReport* report) {
  const Problem pr{params, grid, 0.0, settings.symmetry == Symmetry::conjugate};
  return solve(guess, pr, settings, false, report);
}

PairField newton_travelling(const PairField& guess, double v, const ModelParams& params, const Grid& grid,
                            const NewtonSettings& settings, NewtonReport* report) {
  if (params.omega != 0.0) throw DomainError("travelling solutions are only defined without a trap");
  if (!(std::abs(v) < 1.0)) throw DomainError("travelling solve needs |v| < 1");
  const Problem pr{params, grid, v, false};
  PairField s = solve(guess, pr, settings, true, report);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& z : s.psi1) {
    lo = std::min(lo, std::norm(z));
    hi = std::max(hi, std::norm(z));
  }
  if (hi - lo < 1e-4 * (params.rho0 + std::abs(params.k)))
    throw NumericalError("travelling solve collapsed to the flat background (v beyond the branch)");
  return s;
}

namespace {

// March a co-moving solution from velocity 0 to v at fixed params, with a
// secant predictor; the step is halved on failure and grown on success. Long
// wavelength phase modes of the box make large velocity jumps leave Newton's
// basin.
PairField march_in_v(PairField s, double v, const ModelParams& params, const Grid& grid,
                     const NewtonSettings& settings, double dv) {
  const double dir = v > 0.0 ? 1.0 : -1.0;
  const double min_dv = 1e-4;
  PairField prev = s;
  double v_prev = 0.0, v_cur = 0.0, h = std::min(dv, std::abs(v));
  while (std::abs(v_cur) < std::abs(v)) {
    const double v_next = std::abs(v_cur) + h >= std::abs(v) - 1e-12 ? v : v_cur + dir * h;
    PairField guess = s;
    if (v_cur != v_prev) {
      const double r = (v_next - v_cur) / (v_cur - v_prev);
      for (std::size_t i = 0; i < s.size(); ++i) {
        guess.psi1[i] += r * (s.psi1[i] - prev.psi1[i]);
        guess.psi2[i] += r * (s.psi2[i] - prev.psi2[i]);
      }
    }
    try {
      PairField next = newton_travelling(guess, v_next, params, grid, settings);
      prev = std::move(s);
      s = std::move(next);
      v_prev = v_cur;
      v_cur = v_next;
      h = std::min(dv, 1.5 * h);
    } catch (const NumericalError&) {
      h *= 0.5;
      if (h < min_dv) throw;
    }
  }
  return s;
}

// Continue a co-moving solution in k at fixed v.
PairField march_in_k(PairField s, double k_from, double k_to, double v, const ModelParams& params,
                     const Grid& grid, const NewtonSettings& settings) {
  const double dir = k_to > k_from ? 1.0 : -1.0;
  double k = k_from, h = 0.005 * params.rho0;
  ModelParams p = params;
  while (dir * (k_to - k) > 1e-14) {
    const double next = dir * (k_to - k) <= h ? k_to : k + dir * h;
    p.k = next;
    try {
      s = newton_travelling(s, v, p, grid, settings);
      k = next;
      h = std::min(0.005 * params.rho0, 1.5 * h);
    } catch (const NumericalError&) {
      h *= 0.5;
      if (h < 1e-5 * params.rho0) throw;
    }
  }
  return s;
}

// Position of the density minimum of psi1, refined by a parabola.
double core_position(const PairField& s, const Grid& g) {
  std::size_t m = 1;
  for (std::size_t i = 1; i + 1 < g.n(); ++i)
    if (std::norm(s.psi1[i]) < std::norm(s.psi1[m])) m = i;
  if (m == 0 || m + 1 >= g.n()) return g.x(m);
  const double a = std::norm(s.psi1[m - 1]), b = std::norm(s.psi1[m]), c = std::norm(s.psi1[m + 1]);
  const double den = a - 2.0 * b + c;
  return g.x(m) + (den > 0.0 ? 0.5 * (a - c) / den * g.dx() : 0.0);
}

// f(x + d) by four-point Lagrange interpolation, clamped at the ends where
// the field is flat.
CVec shift_field(const CVec& f, const Grid& g, double d) {
  const auto n = static_cast<std::ptrdiff_t>(g.n());
  CVec out(f.size());
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double u = static_cast<double>(i) + d / g.dx();
    const auto j = static_cast<std::ptrdiff_t>(std::floor(u));
    const double t = u - static_cast<double>(j);
    auto at = [&](std::ptrdiff_t q) { return f[static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(q, 0, n - 1))]; };
    out[static_cast<std::size_t>(i)] = at(j - 1) * (-t * (t - 1.0) * (t - 2.0) / 6.0) +
                                       at(j) * ((t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0) +
                                       at(j + 1) * (-(t + 1.0) * t * (t - 2.0) / 2.0) +
                                       at(j + 2) * ((t + 1.0) * t * (t - 1.0) / 6.0);
  }
  return out;
}

// The translation pin fixes a field value, not the core, so continuation lets
// the core drift; move it back to the origin of the grid and polish.
PairField recentre(PairField s, double v, const ModelParams& params, const Grid& g,
                   const NewtonSettings& settings) {
  for (int pass = 0; pass < 4; ++pass) {
    const double xc = core_position(s, g);
    if (std::abs(xc) < 0.05 * g.dx()) break;
    s.psi1 = shift_field(s.psi1, g, xc);
    s.psi2 = shift_field(s.psi2, g, xc);
    s = newton_travelling(s, v, params, g, settings);
  }
  return s;
}

}  // namespace

PairField travelling_fa(const ModelParams& params, const Grid& grid, double v, double x0, int sign_re,
                        int sign_im, const NewtonSettings& settings, double dv) {
  if (!(dv > 0.0)) throw DomainError("velocity step dv must be positive");
  // Solve on a copy of the grid shifted by x0 so that the core can sit at x0
  // without interpolation.
  const Grid shifted(grid.x_min() - x0, grid.x_max() - x0, grid.n(), grid.stencil(),
                     std::max(Grid::default_max_dx, grid.dx()));
  const PairField rest = newton_travelling(fa_profile(shifted, params, sign_re, sign_im, 0.0), 0.0, params,
                                           shifted, settings);
  if (v == 0.0) return rest;
  try {
    return recentre(march_in_v(rest, v, params, shifted, settings, dv), v, params, shifted, settings);
  } catch (const NumericalError& direct) {
    // Near the coupling where the FA's effective mass changes sign the
    // velocity branch folds early; go round it through a nearby coupling.
    for (double f : {0.2, 0.25, 0.15, 0.3}) {
      const double k_aux = f * params.rho0;
      if (std::abs(k_aux - params.k) < 1e-12) continue;
      try {
        ModelParams aux = params;
        aux.k = k_aux;
        PairField s = newton_travelling(fa_profile(shifted, aux, sign_re, sign_im, 0.0), 0.0, aux, shifted, settings);
        s = march_in_v(std::move(s), v, aux, shifted, settings, dv);
        return recentre(march_in_k(std::move(s), k_aux, params.k, v, params, shifted, settings), v, params,
                        shifted, settings);
      } catch (const NumericalError&) {
      }
    }
    throw NumericalError(std::string("travelling FA not reached: ") + direct.what());
  }
}

double imag_amplitude(const PairField& state) {
  double a = 0.0;
  for (const auto& z : state.psi1) a = std::max(a, std::abs(z.imag()));
  return a;
}

BranchPoint solve_point(const PairField& guess, double k, const ModelParams& params, const Grid& grid,
                        const NewtonSettings& settings) {
  ModelParams p = params;
  p.k = k;
  NewtonReport rep;
  BranchPoint bp;
  bp.k = k;
  bp.state = newton_stationary(guess, p, grid, settings, &rep);
  bp.imag_amplitude = imag_amplitude(bp.state);
  bp.residual = rep.residual;
  return bp;
}

Branch continue_in_k(const BranchPoint& seed, double k_end, double dk, const ModelParams& params,
                     const Grid& grid, const NewtonSettings& settings, int extra_after_ce) {
  if (!(dk > 0.0)) throw DomainError("continuation step dk must be positive");
  if (!(seed.residual <= settings.tol)) throw DomainError("continuation seed is not converged");
  const double dir = k_end >= seed.k ? 1.0 : -1.0;
  Branch b;
  b.points.push_back(seed);
  if (seed.imag_amplitude < k_ce_threshold) b.k_ce = seed.k;
  double h = dk;
  int failures = 0;
  int after = 0;
  const double eps = 1e-12 * std::max(1.0, std::abs(k_end));
  while (dir * (k_end - b.points.back().k) > eps) {
    const BranchPoint& last = b.points.back();
    const double k_next = dir > 0 ? std::min(last.k + h, k_end) : std::max(last.k - h, k_end);
    try {
      BranchPoint bp = solve_point(last.state, k_next, params, grid, settings);
      b.points.push_back(std::move(bp));
      failures = 0;
      h = dk;
    } catch (const NumericalError& e) {
      if (++failures >= 2) {
        b.lost = true;
        b.diagnostic = "branch lost near k=" + std::to_string(k_next) + ": " + e.what();
        break;
      }
      h *= 0.5;
      continue;
    }
    const BranchPoint& now = b.points.back();
    if (!b.k_ce && now.imag_amplitude < k_ce_threshold) b.k_ce = now.k;
    if (b.k_ce && extra_after_ce >= 0 && after++ >= extra_after_ce) break;
  }
  return b;
}

PitchforkFit fit_pitchfork(const Branch& branch, std::size_t window) {
  std::vector<std::pair<double, double>> pts;  // (k, amplitude)
  std::optional<double> first_zero;
  for (const auto& p : branch.points) {
    if (p.imag_amplitude >= k_ce_threshold)
      pts.emplace_back(p.k, p.imag_amplitude);
    else if (!pts.empty()) {
      first_zero = p.k;
      break;
    }
  }
  if (pts.size() < 3) throw DomainError("pitchfork fit needs at least three points with an imaginary part");
  if (pts.size() > window) pts.erase(pts.begin(), pts.end() - static_cast<std::ptrdiff_t>(window));
  const double k_last = pts.back().first;
  const double dir = pts.back().first >= pts.front().first ? 1.0 : -1.0;
  const double span = std::abs(pts.back().first - pts.front().first);
  const double far = first_zero ? std::abs(*first_zero - k_last) : span;

  auto regress = [&](double kc, PitchforkFit* out) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(pts.size());
    for (const auto& [k, a] : pts) {
      const double lx = std::log(dir * (kc - k));
      const double ly = std::log(a);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
    }
    const double beta = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double c = (sy - beta * sx) / n;
    double err = 0.0;
    for (const auto& [k, a] : pts) {
      const double e = std::log(a) - (c + beta * std::log(dir * (kc - k)));
      err += e * e;
    }
    if (out != nullptr) *out = {kc, beta, std::exp(c)};
    return err;
  };

  // Scan k_c beyond the last point carrying an imaginary part, then refine.
  double best_kc = k_last + dir * far * 0.5, best_err = std::numeric_limits<double>::infinity();
  const int samples = 4000;
  for (int s = 1; s <= samples; ++s) {
    const double kc = k_last + dir * far * (static_cast<double>(s) / samples);
    const double e = regress(kc, nullptr);
    if (e < best_err) {
      best_err = e;
      best_kc = kc;
    }
  }
  PitchforkFit fit;
  regress(best_kc, &fit);
  return fit;
}

}  // namespace fluxlab
