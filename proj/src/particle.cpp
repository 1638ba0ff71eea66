#include "fluxlab/particle.hpp"

#include <cmath>
#include <string>

#include "fluxlab/error.hpp"

namespace fluxlab {

double min_density(double rho0, double v) {
  if (std::abs(v) > 1.0) throw DomainError("min_density needs |v| <= 1");
  return rho0 * v * v;
}

double min_separation(double rho0, double v) {
  if (!(rho0 > 0.0)) throw DomainError("rho0 must be positive");
  if (!(v > 0.0 && v < 0.5))
    throw DomainError("closest approach exists only for 0 < v < 1/2 (the arccosh argument drops below 1)");
  const double p = 2.0 * std::sqrt(rho0 - rho0 * v * v);
  return 2.0 / p * std::acosh(1.0 / v - 2.0 * v);
}

double dip_trajectory(double t, double rho0, double v, DipApprox approx) {
  if (!(rho0 > 0.0)) throw DomainError("rho0 must be positive");
  if (!(v > 0.0 && v < 1.0)) throw DomainError("dip trajectory needs 0 < v < 1");
  const double a = std::sqrt(1.0 - v * v);
  const double p = 2.0 * std::sqrt(rho0) * a;
  const double q = 2.0 * rho0 * v * a;
  const double c = std::cosh(q * t);
  double arg = c / v;
  if (approx == DipApprox::exact) arg -= 2.0 * v / c;
  if (!(arg >= 1.0)) throw DomainError("exact dip trajectory undefined at t=" + std::to_string(t));
  return std::acosh(arg) / p;
}

double pair_potential(double x0, double A, double rho0) {
  if (x0 == 0.0) throw DomainError("pair potential is singular at x0 = 0");
  const double s = std::sinh(2.0 * std::sqrt(rho0) * A * x0);
  return rho0 * A * A / (2.0 * s * s);
}

double pair_potential_slope(double x0, double A, double rho0) {
  if (x0 == 0.0) throw DomainError("pair potential is singular at x0 = 0");
  const double b = 2.0 * std::sqrt(rho0) * A;
  const double s = std::sinh(b * x0);
  return -rho0 * A * A * b * std::cosh(b * x0) / (s * s * s);
}

ParticleState ParticleState::make(std::vector<double> x, std::vector<double> v, double rho0) {
  ParticleState s{std::move(x), std::move(v), {}};
  s.validate(rho0);
  for (double vi : s.v) s.A.push_back(std::sqrt(1.0 - vi * vi / rho0));
  return s;
}

void ParticleState::validate(double rho0) const {
  if (!(rho0 > 0.0)) throw DomainError("rho0 must be positive");
  if (x.empty() || x.size() != v.size()) throw DomainError("particle state needs equally many positions and velocities");
  for (double vi : v)
    if (!(vi * vi < rho0)) throw DomainError("particle speed must stay below the sound speed");
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j)
      if (x[i] == x[j]) throw DomainError("coincident soliton positions");
}

namespace {

struct PairTerms {
  double P, Pd, PA, PAA, PAd;
};

// P(A, d) = rho0 A^2 csch^2(s A d), s = sqrt(rho0): one unordered pair,
// counted twice in V.
PairTerms pair_terms(double A, double d, double rho0) {
  const double s = std::sqrt(rho0);
  const double z = s * A * d;
  const double sh = std::sinh(z);
  const double cs2 = 1.0 / (sh * sh);
  const double ct = std::cosh(z) / sh;
  const double g = cs2;
  const double g1 = -2.0 * cs2 * ct;
  const double g2 = 4.0 * cs2 * ct * ct + 2.0 * cs2 * cs2;
  PairTerms t;
  t.P = rho0 * A * A * g;
  t.Pd = rho0 * s * A * A * A * g1;
  t.PA = rho0 * (2.0 * A * g + s * d * A * A * g1);
  t.PAA = rho0 * (2.0 * g + 4.0 * s * d * A * g1 + s * s * d * d * A * A * g2);
  t.PAd = rho0 * (3.0 * s * A * A * g1 + s * s * d * A * A * A * g2);
  return t;
}

}  // namespace

double particle_potential(const ParticleState& s, double rho0, DepthModel model) {
  s.validate(rho0);
  double V = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      const double Ai = model == DepthModel::frozen ? s.A[i] : std::sqrt(1.0 - s.v[i] * s.v[i] / rho0);
      const double Aj = model == DepthModel::frozen ? s.A[j] : std::sqrt(1.0 - s.v[j] * s.v[j] / rho0);
      V += pair_terms(0.5 * (Ai + Aj), s.x[i] - s.x[j], rho0).P;
    }
  return V;
}

std::vector<double> n_body_accelerations(const ParticleState& s, double rho0, DepthModel model) {
  s.validate(rho0);
  const std::size_t n = s.size();
  if (model == DepthModel::frozen && s.A.size() != n) throw DomainError("frozen depths missing; use ParticleState::make");
  std::vector<double> A(n), a1(n, 0.0), a2(n, 0.0);  // A_i, dA_i/dv_i, d2A_i/dv_i2
  for (std::size_t i = 0; i < n; ++i) {
    if (model == DepthModel::frozen) {
      A[i] = s.A[i];
    } else {
      A[i] = std::sqrt(1.0 - s.v[i] * s.v[i] / rho0);
      a1[i] = -s.v[i] / (rho0 * A[i]);
      a2[i] = -1.0 / (rho0 * A[i] * A[i] * A[i]);
    }
  }

  const auto N = static_cast<Eigen::Index>(n);
  Eigen::VectorXd Vx = Eigen::VectorXd::Zero(N);
  Eigen::MatrixXd Vvv = Eigen::MatrixXd::Zero(N, N);
  Eigen::MatrixXd Vvx = Eigen::MatrixXd::Zero(N, N);  // d2V / dv_i dx_k
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto I = static_cast<Eigen::Index>(i), J = static_cast<Eigen::Index>(j);
      const PairTerms t = pair_terms(0.5 * (A[i] + A[j]), s.x[i] - s.x[j], rho0);
      Vx(I) += t.Pd;
      Vx(J) -= t.Pd;
      const double ci = 0.5 * a1[i], cj = 0.5 * a1[j];
      Vvv(I, I) += t.PAA * ci * ci + t.PA * 0.5 * a2[i];
      Vvv(J, J) += t.PAA * cj * cj + t.PA * 0.5 * a2[j];
      Vvv(I, J) += t.PAA * ci * cj;
      Vvv(J, I) += t.PAA * ci * cj;
      Vvx(I, I) += t.PAd * ci;
      Vvx(I, J) -= t.PAd * ci;
      Vvx(J, I) += t.PAd * cj;
      Vvx(J, J) -= t.PAd * cj;
    }
  Eigen::VectorXd v(N);
  for (Eigen::Index i = 0; i < N; ++i) v(i) = s.v[static_cast<std::size_t>(i)];
  const Eigen::MatrixXd M = Eigen::MatrixXd::Identity(N, N) - Vvv;
  const Eigen::VectorXd f = -Vx + Vvx * v;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) throw NumericalError("particle mass matrix is singular (speeds too close to the sound speed)");
  const Eigen::VectorXd acc = lu.solve(f);
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = acc(static_cast<Eigen::Index>(i));
    if (!std::isfinite(out[i])) throw NumericalError("non-finite particle acceleration");
  }
  return out;
}

ParticleTrajectory integrate_particles(const ParticleState& initial, double rho0, double t_end, DepthModel model,
                                       double dt, int record_every) {
  if (!(dt > 0.0) || !(t_end > 0.0)) throw DomainError("particle integration needs dt > 0 and t_end > 0");
  if (record_every < 1) throw DomainError("record_every must be at least 1");
  ParticleState s = initial;
  if (s.A.size() != s.size()) s = ParticleState::make(s.x, s.v, rho0);
  const std::size_t n = s.size();
  ParticleTrajectory tr;
  tr.t.push_back(0.0);
  tr.states.push_back(s);

  auto deriv = [&](const ParticleState& y, std::vector<double>& dx, std::vector<double>& dv) {
    dx = y.v;
    dv = n_body_accelerations(y, rho0, model);
  };
  const auto steps = static_cast<long>(std::ceil(t_end / dt - 1e-9));
  const double h = t_end / static_cast<double>(steps);
  std::vector<double> k1x, k1v, k2x, k2v, k3x, k3v, k4x, k4v;
  ParticleState tmp = s;
  for (long st = 1; st <= steps; ++st) {
    deriv(s, k1x, k1v);
    for (std::size_t i = 0; i < n; ++i) {
      tmp.x[i] = s.x[i] + 0.5 * h * k1x[i];
      tmp.v[i] = s.v[i] + 0.5 * h * k1v[i];
    }
    deriv(tmp, k2x, k2v);
    for (std::size_t i = 0; i < n; ++i) {
      tmp.x[i] = s.x[i] + 0.5 * h * k2x[i];
      tmp.v[i] = s.v[i] + 0.5 * h * k2v[i];
    }
    deriv(tmp, k3x, k3v);
    for (std::size_t i = 0; i < n; ++i) {
      tmp.x[i] = s.x[i] + h * k3x[i];
      tmp.v[i] = s.v[i] + h * k3v[i];
    }
    deriv(tmp, k4x, k4v);
    for (std::size_t i = 0; i < n; ++i) {
      s.x[i] += h / 6.0 * (k1x[i] + 2.0 * k2x[i] + 2.0 * k3x[i] + k4x[i]);
      s.v[i] += h / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]);
    }
    if (st % record_every == 0 || st == steps) {
      tr.t.push_back(static_cast<double>(st) * h);
      tr.states.push_back(s);
    }
  }
  return tr;
}

double fa_effective_accel(double x0, double k, double omega) {
  if (k == -1.0) throw DomainError("fa_effective_accel is singular at k = -1");
  return (1.0 - 5.0 * k) * omega * omega / (1.0 + k) * x0;
}

namespace {
Frequency from_radicand(double r) { return {std::sqrt(std::abs(r)), r < 0.0}; }
}  // namespace

Frequency eq10_frequency(double k, double omega) {
  if (k == -1.0) throw DomainError("frequency is singular at k = -1");
  return from_radicand((5.0 * k - 1.0) / (1.0 + k) * omega * omega);
}

Frequency eq26_frequency(double k, double omega) {
  if (k == -1.0) throw DomainError("frequency is singular at k = -1");
  return from_radicand(2.0 * (5.0 * k - 1.0) / (k + 1.0) * omega * omega);
}

double k_critical_of_v(double v) {
  if (std::abs(v) > 1.0) throw DomainError("k_critical_of_v needs |v| <= 1");
  const double v2 = v * v;
  return -v2 / 3.0 - 1.0 / 21.0 + 4.0 / 21.0 * std::sqrt(7.0 * v2 * v2 - 7.0 * v2 + 4.0);
}

double fixed_point_residual(double x, double k, double rho0, double omega) {
  const double c = (1.0 - 5.0 * k) / (1.0 + k);
  return 8.0 * std::pow(rho0, 1.5) * std::exp(4.0 * std::sqrt(rho0) * x) - 2.0 * c * omega * omega * x;
}

double fa_fixed_point(double k, double rho0, double omega) {
  if (!(rho0 > 0.0)) throw DomainError("rho0 must be positive");
  if (!(omega > 0.0)) throw DomainError("the pair fixed point needs a trap (omega > 0)");
  if (!(k > 0.2)) throw DomainError("the pair fixed point exists only for k > 1/5");
  double lo = -50.0, hi = -1e-3;
  double flo = fixed_point_residual(lo, k, rho0, omega);
  const double fhi = fixed_point_residual(hi, k, rho0, omega);
  if (flo * fhi > 0.0) throw DomainError("no sign change of the fixed-point equation on [-50, -1e-3]");
  while (hi - lo > 1e-14 * std::max(1.0, std::abs(lo))) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double fm = fixed_point_residual(mid, k, rho0, omega);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

FaFrequencies fa_frequencies(double k, double rho0, double omega, double x_tilde) {
  if (k == -1.0) throw DomainError("frequency is singular at k = -1");
  const double trap = 2.0 * (5.0 * k - 1.0) / (k + 1.0) * omega * omega;
  const double bind = 32.0 * rho0 * rho0 * std::exp(4.0 * std::sqrt(rho0) * x_tilde);
  return {from_radicand(trap), from_radicand(trap + bind)};
}

Eigen::Matrix2d fa_linearization(double k, double rho0, double omega, double x_tilde) {
  const double c = 2.0 * (1.0 - 5.0 * k) / (1.0 + k) * omega * omega;
  const double e = 16.0 * rho0 * rho0 * std::exp(4.0 * std::sqrt(rho0) * x_tilde);
  Eigen::Matrix2d m;
  m << c - e, e, e, c - e;
  return m;
}

}  // namespace fluxlab
