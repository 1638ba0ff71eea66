#pragma once

// Model, grid and field types for two linearly coupled 1D Gross-Pitaevskii
// equations
//
//   i d/dt psi_j = -1/2 psi_j'' + |psi_j|^2 psi_j - rho0 psi_j - k psi_{3-j}
//                  + V(x) psi_j,        V(x) = Omega^2 x^2 / 2,
//
// discretized with central finite differences and Neumann (mirror ghost
// point) boundaries.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace fluxlab {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;
using RVec = std::vector<double>;

struct ModelParams {
  double rho0 = 1.0;   ///< chemical potential, > 0
  double k = 0.0;      ///< linear coupling between the components
  double omega = 0.0;  ///< trap strength, >= 0

  /// Throws DomainError unless rho0 > 0, omega >= 0 and all values finite.
  void validate() const;
  /// Throws DomainError unless k > -rho0 (a dark-soliton background exists).
  void require_dark_background() const;
  /// Background amplitude sqrt(rho0 + k) of the in-phase uniform state.
  double background() const;
};

enum class Stencil { three_point = 2, five_point = 4 };

/// Uniform grid on [x_min, x_max] with n points, both ends included.
/// Second derivatives use mirror ghost points, i.e. d/dx = 0 at both ends.
class Grid {
 public:
  static constexpr double default_max_dx = 0.2;

  Grid(double x_min, double x_max, std::size_t n,
       Stencil stencil = Stencil::five_point,
       double max_dx = default_max_dx);

  /// Grid with the smallest n whose spacing does not exceed dx.
  static Grid with_spacing(double x_min, double x_max, double dx,
                           Stencil stencil = Stencil::five_point,
                           double max_dx = default_max_dx);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  std::size_t n() const { return n_; }
  double dx() const { return dx_; }
  Stencil stencil() const { return stencil_; }
  int order() const { return static_cast<int>(stencil_); }
  /// Number of points on each side that need ghost values.
  std::size_t halo() const { return stencil_ == Stencil::five_point ? 2 : 1; }

  double x(std::size_t i) const { return x_min_ + dx_ * static_cast<double>(i); }
  RVec coordinates() const;
  /// Trapezoid weights: dx inside, dx/2 at the two end points.
  RVec weights() const;
  /// Index reflected about the end points (i = -1 -> 1, i = n -> n - 2).
  std::size_t mirror(std::ptrdiff_t i) const;
  /// Index of the grid point nearest to x (clamped to the grid).
  std::size_t nearest(double x) const;

 private:
  double x_min_;
  double x_max_;
  std::size_t n_;
  double dx_;
  Stencil stencil_;
};

/// The two complex components sampled on a grid.
struct PairField {
  CVec psi1;
  CVec psi2;

  static PairField zeros(std::size_t n);
  std::size_t size() const { return psi1.size(); }
  /// Throws DomainError on a length mismatch or a non-finite entry.
  void validate(const Grid& grid) const;
};

struct Observables {
  double norm = 0.0;
  double energy = 0.0;
  double winding1 = 0.0;
  double winding2 = 0.0;
  double relative_winding = 0.0;
  /// Points skipped by the winding sums because |psi| < 1e-12.
  std::size_t skipped_points = 0;
  bool phase_undefined() const { return skipped_points > 0; }
};

RVec trap_potential(const Grid& grid, const ModelParams& params);

/// Second derivative with the grid's stencil and mirror boundaries.
CVec laplacian(std::span<const cplx> field, const Grid& grid);

/// d psi_j / dt for the full model.
PairField gpe_rhs(const PairField& state, const ModelParams& params,
                  const Grid& grid);

/// Allocation-free variant used by integrators; `trap` must hold
/// trap_potential(grid, params) and `out` must already have the right size.
void gpe_rhs_into(const PairField& state, std::span<const double> trap,
                  const ModelParams& params, const Grid& grid, PairField& out);

/// The stationary operator H psi_j = -1/2 psi_j'' + (|psi_j|^2 - rho0 + V)
/// psi_j - k psi_{3-j}. A stationary solution has H psi = 0.
PairField stationary_operator(const PairField& state, const ModelParams& params,
                              const Grid& grid);

/// Max-norm over both components.
double max_norm(const PairField& field);
/// Max-norm of the stationary residual.
double stationary_residual(const PairField& state, const ModelParams& params,
                           const Grid& grid);

Observables observables(const PairField& state, const ModelParams& params,
                        const Grid& grid);

/// Total phase change of `field` across the grid, summing principal-branch
/// increments and skipping points with |psi| < 1e-12.
double phase_winding(std::span<const cplx> field, std::size_t* skipped = nullptr);

}  // namespace fluxlab
