#include "ctxlab/cmatrix.hpp"

#include <algorithm>
#include <cmath>

#include "ctxlab/errors.hpp"

namespace ctxlab {

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

CMatrix CMatrix::operator*(const CMatrix& rhs) const {
  if (cols_ != rhs.rows_) fail(errc::shape, "matrix product: inner dimensions differ");
  CMatrix out(rows_, rhs.cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t k = 0; k < cols_; ++k) {
      const cdouble v = (*this)(r, k);
      if (v == cdouble{}) continue;
      for (std::size_t c = 0; c < rhs.cols_; ++c) out(r, c) += v * rhs(k, c);
    }
  return out;
}

double CMatrix::max_abs() const {
  double m = 0.0;
  for (const cdouble& v : a_) m = std::max(m, std::abs(v));
  return m;
}

double CMatrix::max_abs_diff(const CMatrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) fail(errc::shape, "matrix diff: dimensions differ");
  double m = 0.0;
  for (std::size_t i = 0; i < a_.size(); ++i) m = std::max(m, std::abs(a_[i] - rhs.a_[i]));
  return m;
}

std::vector<cdouble> apply(const CMatrix& m, const std::vector<cdouble>& v) {
  if (m.cols() != v.size()) fail(errc::shape, "matrix-vector product: dimensions differ");
  std::vector<cdouble> out(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    cdouble acc = 0.0;
    for (std::size_t c = 0; c < m.cols(); ++c) acc += m(r, c) * v[c];
    out[r] = acc;
  }
  return out;
}

cdouble inner(const std::vector<cdouble>& a, const std::vector<cdouble>& b) {
  if (a.size() != b.size()) fail(errc::shape, "inner product: lengths differ");
  cdouble acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

double norm2(const std::vector<cdouble>& v) {
  double acc = 0.0;
  for (const cdouble& x : v) acc += std::norm(x);
  return std::sqrt(acc);
}

namespace {

cdouble gaussian(CounterRng& rng) {
  const double u1 = rng.next_unit_open();
  const double u2 = rng.next_unit_open();
  const double r = std::sqrt(-2.0 * std::log(u1));
  constexpr double two_pi = 6.283185307179586476925286766559;
  return {r * std::cos(two_pi * u2), r * std::sin(two_pi * u2)};
}

}  // namespace

CMatrix random_unitary(std::size_t dim, CounterRng& rng) {
  CMatrix m(dim, dim);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) m(r, c) = gaussian(rng);

  // Modified Gram-Schmidt over columns.
  for (std::size_t c = 0; c < dim; ++c) {
    for (std::size_t prev = 0; prev < c; ++prev) {
      cdouble proj = 0.0;
      for (std::size_t r = 0; r < dim; ++r) proj += std::conj(m(r, prev)) * m(r, c);
      for (std::size_t r = 0; r < dim; ++r) m(r, c) -= proj * m(r, prev);
    }
    double nrm = 0.0;
    for (std::size_t r = 0; r < dim; ++r) nrm += std::norm(m(r, c));
    nrm = std::sqrt(nrm);
    if (nrm < 1e-12) fail(errc::internal, "random_unitary: degenerate Gaussian draw");
    for (std::size_t r = 0; r < dim; ++r) m(r, c) /= nrm;
  }
  return m;
}

std::vector<cdouble> random_state(std::size_t dim, CounterRng& rng) {
  std::vector<cdouble> v(dim);
  for (auto& x : v) x = gaussian(rng);
  const double nrm = norm2(v);
  if (nrm < 1e-12) fail(errc::internal, "random_state: degenerate Gaussian draw");
  for (auto& x : v) x /= nrm;
  return v;
}

}  // namespace ctxlab
