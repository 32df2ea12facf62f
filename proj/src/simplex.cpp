#include "ctxlab/simplex.hpp"

#include <cmath>
#include <cstddef>
#include <limits>

#include "ctxlab/errors.hpp"

namespace ctxlab::lp {

namespace {

// Full tableau: m rows over (n original + m artificial + rhs) columns, plus a
// reduced-cost row that is eliminated together with the constraint rows.
struct Tableau {
  std::size_t n_orig = 0;
  std::vector<std::vector<double>> rows;  // each n_total + 1 wide, rhs last
  std::vector<double> cost;               // reduced costs, n_total + 1 wide
  std::vector<int> basis;                 // basis[i] = column basic in row i

  std::size_t n_total() const { return cost.size() - 1; }
  std::size_t rhs() const { return cost.size() - 1; }

  void pivot(std::size_t row, std::size_t col) {
    const double inv = 1.0 / rows[row][col];
    for (double& v : rows[row]) v *= inv;
    rows[row][col] = 1.0;  // kill roundoff on the pivot itself
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == row) continue;
      const double factor = rows[i][col];
      if (factor == 0.0) continue;
      for (std::size_t j = 0; j < rows[i].size(); ++j) rows[i][j] -= factor * rows[row][j];
      rows[i][col] = 0.0;
    }
    const double factor = cost[col];
    if (factor != 0.0) {
      for (std::size_t j = 0; j < cost.size(); ++j) cost[j] -= factor * rows[row][j];
      cost[col] = 0.0;
    }
    basis[row] = static_cast<int>(col);
  }

  // Rebuild reduced costs from the full cost vector over all columns.
  void set_costs(const std::vector<double>& full_cost) {
    cost.assign(cost.size(), 0.0);
    for (std::size_t j = 0; j < full_cost.size(); ++j) cost[j] = full_cost[j];
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const double cb = full_cost[static_cast<std::size_t>(basis[i])];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j < cost.size(); ++j) cost[j] -= cb * rows[i][j];
    }
  }

  // Bland: entering column = smallest eligible index with negative reduced
  // cost; leaving row = min ratio, ties broken by smallest basic column.
  Status iterate(std::size_t max_col) {
    for (;;) {
      std::size_t entering = n_total();
      for (std::size_t j = 0; j < max_col; ++j) {
        if (cost[j] < -kFeasTol) {
          entering = j;
          break;
        }
      }
      if (entering == n_total()) return Status::optimal;

      std::size_t leaving = rows.size();
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i][entering] <= kFeasTol) continue;
        const double ratio = rows[i][rhs()] / rows[i][entering];
        if (ratio < best_ratio - kFeasTol ||
            (ratio < best_ratio + kFeasTol && (leaving == rows.size() || basis[i] < basis[leaving]))) {
          best_ratio = ratio;
          leaving = i;
        }
      }
      if (leaving == rows.size()) return Status::unbounded;
      pivot(leaving, entering);
    }
  }
};

}  // namespace

Solution solve(const Problem& p) {
  const std::size_t m = p.a.size();
  const std::size_t n = p.c.size();
  if (p.b.size() != m) fail(errc::shape, "lp: b length does not match row count");
  for (const auto& row : p.a)
    if (row.size() != n) fail(errc::shape, "lp: ragged constraint matrix");

  Tableau t;
  t.n_orig = n;
  t.cost.assign(n + m + 1, 0.0);
  t.rows.assign(m, std::vector<double>(n + m + 1, 0.0));
  t.basis.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double sign = p.b[i] < 0.0 ? -1.0 : 1.0;
    for (std::size_t j = 0; j < n; ++j) t.rows[i][j] = sign * p.a[i][j];
    t.rows[i][n + i] = 1.0;
    t.rows[i][t.rhs()] = sign * p.b[i];
    t.basis[i] = static_cast<int>(n + i);
  }

  // Phase 1: minimize the sum of artificials. Artificials never re-enter.
  std::vector<double> phase1_cost(n + m, 0.0);
  for (std::size_t j = n; j < n + m; ++j) phase1_cost[j] = 1.0;
  t.set_costs(phase1_cost);
  if (t.iterate(n) == Status::unbounded) fail(errc::internal, "lp: phase 1 reported unbounded");

  const double infeasibility = -t.cost[t.rhs()];
  if (infeasibility > kFeasTol) return Solution{Status::infeasible, 0.0, {}};

  // Drive leftover artificials out of the basis; rows where that is
  // impossible are redundant and get dropped.
  for (std::size_t i = 0; i < t.rows.size();) {
    if (t.basis[i] < static_cast<int>(n)) {
      ++i;
      continue;
    }
    std::size_t col = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(t.rows[i][j]) > kFeasTol) {
        col = j;
        break;
      }
    }
    if (col < n) {
      t.pivot(i, col);
      ++i;
    } else {
      t.rows.erase(t.rows.begin() + static_cast<std::ptrdiff_t>(i));
      t.basis.erase(t.basis.begin() + static_cast<std::ptrdiff_t>(i));
    }
  }

  // Phase 2 over the original columns only.
  std::vector<double> phase2_cost(n + m, 0.0);
  for (std::size_t j = 0; j < n; ++j) phase2_cost[j] = p.c[j];
  t.set_costs(phase2_cost);
  const Status status = t.iterate(n);
  if (status == Status::unbounded) return Solution{Status::unbounded, 0.0, {}};

  Solution sol;
  sol.status = Status::optimal;
  sol.x.assign(n, 0.0);
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    if (t.basis[i] < static_cast<int>(n)) sol.x[static_cast<std::size_t>(t.basis[i])] = t.rows[i][t.rhs()];
  sol.objective = 0.0;
  for (std::size_t j = 0; j < n; ++j) sol.objective += p.c[j] * sol.x[j];
  return sol;
}

}  // namespace ctxlab::lp
