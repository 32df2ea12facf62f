#ifndef CTXLAB_TEST_ORACLES_HPP
#define CTXLAB_TEST_ORACLES_HPP

// Brute-force reference implementations used only by tests. These must stay
// independent of the library code paths they check: permanents by the n!-term
// definition, amplitudes by explicit permutation sums, bounds by exhaustive
// evaluation of behaviors.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "ctxlab/cmatrix.hpp"
#include "ctxlab/fock.hpp"
#include "ctxlab/hv.hpp"
#include "ctxlab/inequalities.hpp"

namespace ctxlab::oracle {

// Perm(A) = sum over all permutations sigma of prod_i A(i, sigma(i)).
inline cdouble permanent_naive(const CMatrix& m) {
  const std::size_t n = m.rows();
  if (n == 0) return 1.0;
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  cdouble total = 0.0;
  do {
    cdouble prod = 1.0;
    for (std::size_t i = 0; i < n; ++i) prod *= m(i, perm[i]);
    total += prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

inline std::vector<int> photon_modes(const fock::FockState& s) {
  std::vector<int> modes;
  for (int m = 0; m < s.modes(); ++m)
    for (int k = 0; k < s.occupations[static_cast<std::size_t>(m)]; ++k) modes.push_back(m);
  return modes;
}

inline double factorial_product(const fock::FockState& s) {
  double prod = 1.0;
  for (int n : s.occupations)
    for (int k = 2; k <= n; ++k) prod *= k;
  return prod;
}

// Amplitude as an explicit sum over photon-to-photon assignments:
// A(s -> t) = sum_sigma prod_k U(t_modes[sigma(k)], s_modes[k]) / sqrt(s! t!).
inline double transition_probability_naive(const fock::ModeUnitary& u, const fock::FockState& in,
                                           const fock::FockState& out) {
  const std::vector<int> in_modes = photon_modes(in);
  const std::vector<int> out_modes = photon_modes(out);
  if (in_modes.size() != out_modes.size()) return 0.0;
  const std::size_t n = in_modes.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  cdouble amplitude = 0.0;
  do {
    cdouble prod = 1.0;
    for (std::size_t k = 0; k < n; ++k)
      prod *= u.matrix()(static_cast<std::size_t>(out_modes[perm[k]]), static_cast<std::size_t>(in_modes[k]));
    amplitude += prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  amplitude /= std::sqrt(factorial_product(in) * factorial_product(out));
  return std::norm(amplitude);
}

// Extrema of an expression over every deterministic behavior, going through
// the Behavior machinery rather than direct +-1 products.
inline std::pair<double, double> classical_bounds_via_behaviors(const hv::Scenario& scenario,
                                                                const ineq::InequalityExpr& expr) {
  const int n = scenario.observables;
  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
    std::vector<int> values(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) values[static_cast<std::size_t>(i)] = (mask >> i) & 1 ? 1 : -1;
    const hv::Behavior b = hv::deterministic_behavior(hv::DeterministicAssignment(values), scenario);
    const double v = ineq::evaluate(expr, b);
    if (first || v < lo) lo = v;
    if (first || v > hi) hi = v;
    first = false;
  }
  return {lo, hi};
}

// Midpoint-rule quadrature of P(x > y) for x, y i.i.d. Uniform(0,1).
inline double p_first_larger_quadrature(int grid) {
  long hits = 0;
  for (int i = 0; i < grid; ++i)
    for (int j = 0; j < grid; ++j)
      if ((i + 0.5) / grid > (j + 0.5) / grid) ++hits;
  return static_cast<double>(hits) / (static_cast<double>(grid) * grid);
}

}  // namespace ctxlab::oracle

#endif
