#ifndef CTXLAB_CMATRIX_HPP
#define CTXLAB_CMATRIX_HPP

#include <complex>
#include <cstddef>
#include <vector>

#include "ctxlab/rng.hpp"

namespace ctxlab {

using cdouble = std::complex<double>;

// Dense row-major complex matrix. Everything in this project is at most a
// few dozen rows, so no effort is spent on blocking or expression templates.
class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

  static CMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  cdouble& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  const cdouble& operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

  CMatrix adjoint() const;
  CMatrix operator*(const CMatrix& rhs) const;

  double max_abs() const;
  double max_abs_diff(const CMatrix& rhs) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cdouble> a_;
};

std::vector<cdouble> apply(const CMatrix& m, const std::vector<cdouble>& v);

// <a|b>, conjugate-linear in the first argument.
cdouble inner(const std::vector<cdouble>& a, const std::vector<cdouble>& b);

double norm2(const std::vector<cdouble>& v);

// Haar-ish random unitary via Gram-Schmidt on a complex Gaussian matrix.
// Good enough for property sweeps; not calibrated for Haar statistics.
CMatrix random_unitary(std::size_t dim, CounterRng& rng);

std::vector<cdouble> random_state(std::size_t dim, CounterRng& rng);

}  // namespace ctxlab

#endif
