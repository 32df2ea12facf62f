#ifndef CTXLAB_SIMPLEX_HPP
#define CTXLAB_SIMPLEX_HPP

#include <vector>

namespace ctxlab::lp {

inline constexpr double kFeasTol = 1e-9;

// Equality-form linear program:  min c.x  s.t.  A x = b, x >= 0.
struct Problem {
  std::vector<std::vector<double>> a;  // m rows of n coefficients
  std::vector<double> b;               // m
  std::vector<double> c;               // n
};

enum class Status { optimal, infeasible, unbounded };

struct Solution {
  Status status = Status::optimal;
  double objective = 0.0;
  std::vector<double> x;
};

// Two-phase dense tableau simplex with Bland's anti-cycling rule. Problems in
// this project have at most a few dozen variables; no scaling or refactoring.
Solution solve(const Problem& p);

}  // namespace ctxlab::lp

#endif
