#pragma once

// Square banded matrix in LAPACK general-band storage, with a direct solve.

#include <cstddef>
#include <span>
#include <vector>

namespace fluxlab {

class BandMatrix {
 public:
  BandMatrix(std::size_t n, int kl, int ku);

  std::size_t n() const { return n_; }
  int kl() const { return kl_; }
  int ku() const { return ku_; }
  bool in_band(std::size_t i, std::size_t j) const;
  /// Entry (i, j); throws DomainError outside the band.
  double& operator()(std::size_t i, std::size_t j);
  double operator()(std::size_t i, std::size_t j) const;
  void set_zero();
  /// Replace row i by the unit row e_i (used for pinning an unknown).
  void set_unit_row(std::size_t i);
  std::vector<double> multiply(std::span<const double> x) const;
  double norm1() const;

  /// LU-factor a copy and solve A x = b. Returns x; the reciprocal 1-norm
  /// condition estimate is written to *rcond when given. Throws
  /// SingularMatrixError when the factorization breaks down or rcond < min_rcond.
  std::vector<double> solve(std::span<const double> b, double* rcond = nullptr,
                            double min_rcond = 1e-15) const;

 private:
  std::size_t index(std::size_t i, std::size_t j) const;
  std::size_t n_;
  int kl_, ku_;
  std::size_t ld_;
  std::vector<double> ab_;
};

}  // namespace fluxlab
