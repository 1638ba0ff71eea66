#include "fluxlab/spectrum.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "fluxlab/error.hpp"

namespace fluxlab {

namespace {

// Dense matrix of -1/2 d^2/dx^2 with the grid's stencil and mirror ends.
Eigen::MatrixXd kinetic_matrix(const Grid& g) {
  const std::size_t n = g.n();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  const double s = 1.0 / (g.dx() * g.dx());
  std::vector<std::pair<int, double>> taps;
  if (g.stencil() == Stencil::five_point)
    taps = {{-2, -s / 12}, {-1, 16 * s / 12}, {0, -30 * s / 12}, {1, 16 * s / 12}, {2, -s / 12}};
  else
    taps = {{-1, s}, {0, -2 * s}, {1, s}};
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& [o, c] : taps) h(i, g.mirror(static_cast<std::ptrdiff_t>(i) + o)) += -0.5 * c;
  return h;
}

}  // namespace

BdgOperator assemble_bdg(const PairField& state, const ModelParams& params, const Grid& grid, double tol) {
  params.validate();
  state.validate(grid);
  const double res = stationary_residual(state, params, grid);
  if (!(res <= 100.0 * tol))
    throw DomainError("refusing to linearize about a non-stationary state (residual " + std::to_string(res) + ")");

  const std::size_t n = grid.n();
  const Eigen::MatrixXd h = kinetic_matrix(grid);
  const RVec trap = trap_potential(grid, params);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4 * n, 4 * n);
  // Block offsets of Re d_j and Im d_j.
  auto ru = [n](int j) { return static_cast<Eigen::Index>(2 * j * n); };
  auto rw = [n](int j) { return static_cast<Eigen::Index>((2 * j + 1) * n); };
  const auto nn = static_cast<Eigen::Index>(n);

  for (int j = 0; j < 2; ++j) {
    const CVec& psi = j == 0 ? state.psi1 : state.psi2;
    // d(Re d)/dt = G_im, d(Im d)/dt = -G_re
    m.block(ru(j), rw(j), nn, nn) = h;
    m.block(rw(j), ru(j), nn, nn) = -h;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = psi[i].real(), b = psi[i].imag();
      const double base = trap[i] - params.rho0;
      const auto ii = static_cast<Eigen::Index>(i);
      m(ru(j) + ii, ru(j) + ii) += 2 * a * b;
      m(ru(j) + ii, rw(j) + ii) += a * a + 3 * b * b + base;
      m(rw(j) + ii, ru(j) + ii) -= 3 * a * a + b * b + base;
      m(rw(j) + ii, rw(j) + ii) -= 2 * a * b;
      const int o = 1 - j;
      m(ru(j) + ii, rw(o) + ii) += -params.k;
      m(rw(j) + ii, ru(o) + ii) += params.k;
    }
  }
  return BdgOperator{grid, params, state, std::move(m)};
}

Eigen::MatrixXcd BdgOperator::complex_matrix() const {
  const auto nn = static_cast<Eigen::Index>(n());
  const Eigen::MatrixXd h = kinetic_matrix(grid);
  const RVec trap = trap_potential(grid, params);
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(4 * nn, 4 * nn);
  // (a1, a2, b1, b2)
  for (int j = 0; j < 2; ++j) {
    const CVec& psi = j == 0 ? state.psi1 : state.psi2;
    const Eigen::Index a = j * nn, b = (2 + j) * nn, ao = (1 - j) * nn, bo = (3 - j) * nn;
    c.block(a, a, nn, nn) = -h.cast<cplx>();
    c.block(b, b, nn, nn) = h.cast<cplx>();
    for (Eigen::Index i = 0; i < nn; ++i) {
      const cplx z = psi[static_cast<std::size_t>(i)];
      const double diag = trap[static_cast<std::size_t>(i)] - params.rho0 + 2.0 * std::norm(z);
      c(a + i, a + i) -= diag;
      c(b + i, b + i) += diag;
      c(a + i, b + i) = -z * z;
      c(b + i, a + i) = std::conj(z * z);
      c(a + i, ao + i) = params.k;
      c(b + i, bo + i) = -params.k;
    }
  }
  return c;
}

namespace {

struct Eig {
  std::vector<cplx> mu;
  Eigen::MatrixXd vr;  // LAPACK packed right eigenvectors (empty when not requested)
};

Eig dgeev(const Eigen::MatrixXd& m, bool vectors) {
  const auto n = static_cast<lapack_int>(m.rows());
  Eigen::MatrixXd a = m;
  std::vector<double> wr(static_cast<std::size_t>(n)), wi(static_cast<std::size_t>(n));
  Eig out;
  if (vectors) out.vr.resize(n, n);
  double dummy = 0.0;
  const lapack_int info = LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', vectors ? 'V' : 'N', n, a.data(), n, wr.data(),
                                        wi.data(), &dummy, 1, vectors ? out.vr.data() : &dummy, vectors ? n : 1);
  if (info != 0) throw NumericalError("dgeev failed (info " + std::to_string(info) + ")");
  out.mu.resize(static_cast<std::size_t>(n));
  for (lapack_int i = 0; i < n; ++i) out.mu[static_cast<std::size_t>(i)] = cplx(wr[i], wi[i]);
  return out;
}

// Column i of the complex eigenvector from LAPACK's packed real storage.
Eigen::VectorXcd eigenvector(const Eig& e, std::size_t i) {
  const auto ii = static_cast<Eigen::Index>(i);
  const double im = e.mu[i].imag();
  if (im == 0.0) return e.vr.col(ii).cast<cplx>();
  const bool first = im > 0.0;
  const Eigen::Index re_col = first ? ii : ii - 1;
  Eigen::VectorXcd v(e.vr.rows());
  for (Eigen::Index r = 0; r < v.size(); ++r)
    v(r) = cplx(e.vr(r, re_col), first ? e.vr(r, re_col + 1) : -e.vr(r, re_col + 1));
  return v;
}

Mode to_mode(const Eigen::VectorXcd& v, std::size_t n) {
  Mode m;
  m.a1.resize(n);
  m.a2.resize(n);
  m.b1.resize(n);
  m.b2.resize(n);
  const auto nn = static_cast<Eigen::Index>(n);
  for (Eigen::Index i = 0; i < nn; ++i) {
    const cplx u1 = v(i), w1 = v(nn + i), u2 = v(2 * nn + i), w2 = v(3 * nn + i);
    const auto s = static_cast<std::size_t>(i);
    m.a1[s] = u1 + cplx(0, 1) * w1;
    m.b1[s] = u1 - cplx(0, 1) * w1;
    m.a2[s] = u2 + cplx(0, 1) * w2;
    m.b2[s] = u2 - cplx(0, 1) * w2;
  }
  return m;
}

double gauge_overlap(const Eigen::VectorXcd& v, const PairField& s) {
  const std::size_t n = s.size();
  Eigen::VectorXd g(4 * n);
  for (std::size_t i = 0; i < n; ++i) {
    // i psi0 in (Re, Im) blocks
    g(static_cast<Eigen::Index>(i)) = -s.psi1[i].imag();
    g(static_cast<Eigen::Index>(n + i)) = s.psi1[i].real();
    g(static_cast<Eigen::Index>(2 * n + i)) = -s.psi2[i].imag();
    g(static_cast<Eigen::Index>(3 * n + i)) = s.psi2[i].real();
  }
  const double den = v.norm() * g.norm();
  return den > 0.0 ? std::abs(v.dot(g.cast<cplx>())) / den : 0.0;
}

// Overlap with the translation generator d psi0/dx (central differences).
double translation_overlap(const Eigen::VectorXcd& v, const PairField& s, const Grid& grid) {
  const std::size_t n = s.size();
  Eigen::VectorXd g(4 * n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t l = grid.mirror(static_cast<std::ptrdiff_t>(i) - 1), r = grid.mirror(static_cast<std::ptrdiff_t>(i) + 1);
    const cplx d1 = s.psi1[r] - s.psi1[l], d2 = s.psi2[r] - s.psi2[l];
    g(static_cast<Eigen::Index>(i)) = d1.real();
    g(static_cast<Eigen::Index>(n + i)) = d1.imag();
    g(static_cast<Eigen::Index>(2 * n + i)) = d2.real();
    g(static_cast<Eigen::Index>(3 * n + i)) = d2.imag();
  }
  const double den = v.norm() * g.norm();
  return den > 0.0 ? std::abs(v.dot(g.cast<cplx>())) / den : 0.0;
}

}  // namespace

Spectrum eig_spectrum(const BdgOperator& op, const SpectrumOptions& options) {
  const std::size_t n = op.n();
  const double scale = op.params.rho0;
  Eig e = dgeev(op.real, options.want_modes);

  Spectrum sp;
  sp.eigenvalues.resize(e.mu.size());
  for (std::size_t i = 0; i < e.mu.size(); ++i) sp.eigenvalues[i] = cplx(0.0, -1.0) * e.mu[i];  // lambda = -i mu
  sp.operator_norm = op.real.cwiseAbs().rowwise().sum().maxCoeff();

  // -lambda must be in the spectrum (conjugates are exact for a real matrix).
  for (const auto& l : sp.eigenvalues) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& m : sp.eigenvalues) best = std::min(best, std::abs(m + l));
    sp.symmetry_error = std::max(sp.symmetry_error, best);
  }
  sp.symmetry_violation = sp.symmetry_error > 1e-8 * sp.operator_norm;

  auto verdict = [&]() {
    sp.max_im = 0.0;
    sp.max_unstable = 0.0;
    std::size_t arg = sp.eigenvalues.size();
    for (std::size_t i = 0; i < sp.eigenvalues.size(); ++i) {
      if (std::find(sp.excluded.begin(), sp.excluded.end(), i) != sp.excluded.end()) continue;
      const double im = std::abs(sp.eigenvalues[i].imag());
      // Prefer the member of a quadruple with Im > 0 and Re >= 0 for reporting.
      if (im > sp.max_im * (1.0 + 1e-9) ||
          (arg < sp.eigenvalues.size() && im >= sp.max_im * (1.0 - 1e-9) && sp.eigenvalues[i].imag() > 0 &&
           sp.eigenvalues[i].real() >= 0 &&
           !(sp.eigenvalues[arg].imag() > 0 && sp.eigenvalues[arg].real() >= 0))) {
        sp.max_im = std::max(sp.max_im, im);
        arg = i;
      }
    }
    if (arg < sp.eigenvalues.size()) sp.max_unstable = sp.eigenvalues[arg];
    sp.stable = sp.max_im < options.threshold * scale;
    return arg;
  };
  std::size_t arg = verdict();

  // The phase mode (and without a trap the translation mode) is a double zero
  // eigenvalue that roundoff may split along the imaginary axis; it is
  // neutral and must not decide the verdict.
  const bool tiny = arg < sp.eigenvalues.size() && std::abs(sp.eigenvalues[arg]) < 1e-3 * scale;
  if (options.exclude_gauge && (tiny || options.want_modes) && (!sp.stable || options.want_modes)) {
    if (e.vr.size() == 0) e = dgeev(op.real, true);
    std::vector<std::size_t> order(sp.eigenvalues.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return std::abs(sp.eigenvalues[a]) < std::abs(sp.eigenvalues[b]); });
    for (std::size_t idx : order) {
      if (std::abs(sp.eigenvalues[idx]) > 1e-3 * scale) break;
      if (std::find(sp.excluded.begin(), sp.excluded.end(), idx) != sp.excluded.end()) continue;
      const Eigen::VectorXcd vec = eigenvector(e, idx);
      const bool neutral = gauge_overlap(vec, op.state) > 0.99 ||
                           (op.params.omega == 0.0 && translation_overlap(vec, op.state, op.grid) > 0.99);
      if (neutral) {
        const cplx l = sp.eigenvalues[idx];
        const double tol = std::max(1e-12, 1e-6 * std::abs(l));
        for (std::size_t j = 0; j < sp.eigenvalues.size(); ++j) {
          const cplx m = sp.eigenvalues[j];
          if (std::abs(m - l) <= tol || std::abs(m + l) <= tol || std::abs(m - std::conj(l)) <= tol ||
              std::abs(m + std::conj(l)) <= tol)
            sp.excluded.push_back(j);
        }
      }
    }
    verdict();
  }

  if (options.want_modes) {
    sp.modes.reserve(sp.eigenvalues.size());
    for (std::size_t i = 0; i < sp.eigenvalues.size(); ++i) sp.modes.push_back(to_mode(eigenvector(e, i), n));
  }
  return sp;
}

void summarize_sweep(StabilitySweep& sw) {
  sw.windows.clear();
  sw.k_cs.reset();
  bool seen_unstable = false;
  for (const SweepRow& r : sw.rows) {
    if (r.stable && seen_unstable && !sw.k_cs) sw.k_cs = r.k;
    seen_unstable = seen_unstable || !r.stable;
    if (sw.windows.empty() || sw.windows.back().stable != r.stable)
      sw.windows.push_back({r.k, r.k, r.stable});
    else
      sw.windows.back().k_to = r.k;
  }
  // Stable throughout: the whole range is past the threshold.
  if (!seen_unstable && !sw.rows.empty()) sw.k_cs = sw.rows.front().k;
}

StabilitySweep stability_sweep(const std::vector<BranchPoint>& branch, const ModelParams& params,
                               const Grid& grid, const SpectrumOptions& options, double tol) {
  StabilitySweep sw;
  for (const auto& bp : branch) {
    ModelParams p = params;
    p.k = bp.k;
    const Spectrum s = eig_spectrum(assemble_bdg(bp.state, p, grid, tol), options);
    sw.rows.push_back({bp.k, s.max_im, s.max_unstable.real(), s.stable});
  }
  std::sort(sw.rows.begin(), sw.rows.end(), [](const SweepRow& a, const SweepRow& b) { return a.k < b.k; });
  summarize_sweep(sw);
  return sw;
}

}  // namespace fluxlab
