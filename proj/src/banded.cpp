#include "fluxlab/banded.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "fluxlab/error.hpp"

namespace fluxlab {

// Column-major band storage with kl extra rows on top for the LU fill-in:
// A(i, j) lives at ab[(kl + ku + i - j) + j * ld].
BandMatrix::BandMatrix(std::size_t n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), ld_(static_cast<std::size_t>(2 * kl + ku + 1)) {
  if (n == 0 || kl < 0 || ku < 0) throw DomainError("invalid band matrix shape");
  ab_.assign(ld_ * n_, 0.0);
}

bool BandMatrix::in_band(std::size_t i, std::size_t j) const {
  const auto d = static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(j);
  return i < n_ && j < n_ && d <= kl_ && -d <= ku_;
}

std::size_t BandMatrix::index(std::size_t i, std::size_t j) const {
  if (!in_band(i, j))
    throw DomainError("band matrix entry (" + std::to_string(i) + ", " + std::to_string(j) + ") outside the band");
  return static_cast<std::size_t>(kl_ + ku_) + i - j + j * ld_;
}

double& BandMatrix::operator()(std::size_t i, std::size_t j) { return ab_[index(i, j)]; }
double BandMatrix::operator()(std::size_t i, std::size_t j) const { return ab_[index(i, j)]; }

void BandMatrix::set_zero() { std::fill(ab_.begin(), ab_.end(), 0.0); }

void BandMatrix::set_unit_row(std::size_t i) {
  const std::size_t lo = i > static_cast<std::size_t>(kl_) ? i - kl_ : 0;
  const std::size_t hi = std::min(n_ - 1, i + ku_);
  for (std::size_t j = lo; j <= hi; ++j) (*this)(i, j) = 0.0;
  (*this)(i, i) = 1.0;
}

std::vector<double> BandMatrix::multiply(std::span<const double> x) const {
  if (x.size() != n_) throw DomainError("band multiply: size mismatch");
  std::vector<double> y(n_, 0.0);
  for (std::size_t j = 0; j < n_; ++j) {
    const std::size_t lo = j > static_cast<std::size_t>(ku_) ? j - ku_ : 0;
    const std::size_t hi = std::min(n_ - 1, j + kl_);
    for (std::size_t i = lo; i <= hi; ++i) y[i] += ab_[index(i, j)] * x[j];
  }
  return y;
}

double BandMatrix::norm1() const {
  double best = 0.0;
  for (std::size_t j = 0; j < n_; ++j) {
    const std::size_t lo = j > static_cast<std::size_t>(ku_) ? j - ku_ : 0;
    const std::size_t hi = std::min(n_ - 1, j + kl_);
    double s = 0.0;
    for (std::size_t i = lo; i <= hi; ++i) s += std::abs(ab_[index(i, j)]);
    best = std::max(best, s);
  }
  return best;
}

std::vector<double> BandMatrix::solve(std::span<const double> b, double* rcond, double min_rcond) const {
  if (b.size() != n_) throw DomainError("band solve: size mismatch");
  std::vector<double> lu = ab_;
  std::vector<lapack_int> piv(n_);
  const auto n = static_cast<lapack_int>(n_);
  const auto ld = static_cast<lapack_int>(ld_);
  const double anorm = norm1();
  lapack_int info = LAPACKE_dgbtrf(LAPACK_COL_MAJOR, n, n, kl_, ku_, lu.data(), ld, piv.data());
  if (info < 0) throw NumericalError("dgbtrf: invalid argument " + std::to_string(-info));
  if (info > 0) throw SingularMatrixError("banded Jacobian is exactly singular", 0.0);
  double rc = 0.0;
  info = LAPACKE_dgbcon(LAPACK_COL_MAJOR, '1', n, kl_, ku_, lu.data(), ld, piv.data(), anorm, &rc);
  if (info != 0) throw NumericalError("dgbcon failed");
  if (rcond != nullptr) *rcond = rc;
  if (!(rc >= min_rcond)) throw SingularMatrixError("banded Jacobian is numerically singular", rc);
  std::vector<double> x(b.begin(), b.end());
  info = LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', n, kl_, ku_, 1, lu.data(), ld, piv.data(), x.data(), n);
  if (info != 0) throw NumericalError("dgbtrs failed");
  return x;
}

}  // namespace fluxlab
