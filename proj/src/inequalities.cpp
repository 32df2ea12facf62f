#include "ctxlab/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>

#include "ctxlab/errors.hpp"
#include "ctxlab/simplex.hpp"

namespace ctxlab::ineq {

Scenario cycle_scenario(int n) {
  if (n < 3) fail(errc::validation, "cycle_scenario: cycle needs at least 3 observables");
  Scenario s;
  s.observables = n;
  for (int i = 1; i <= n; ++i) s.contexts.push_back({i, i % n + 1});
  s.validate();
  return s;
}

bool is_cycle(const Scenario& scenario) {
  if (scenario.observables < 3) return false;
  if (scenario.contexts.size() != static_cast<std::size_t>(scenario.observables)) return false;
  const Scenario reference = cycle_scenario(scenario.observables);
  for (const MeasurementContext& edge : reference.contexts) {
    const bool found = std::any_of(scenario.contexts.begin(), scenario.contexts.end(),
                                   [&edge](const MeasurementContext& c) { return hv::same_pair(c, edge); });
    if (!found) return false;
  }
  return true;
}

InequalityExpr InequalityExpr::correlator_sum(const Scenario& scenario) {
  InequalityExpr expr;
  for (const MeasurementContext& ctx : scenario.contexts) expr.terms.push_back({ctx, 1.0});
  return expr;
}

double correlator(const Behavior& b, const MeasurementContext& ctx) {
  const hv::ContextTable t = b.table_for(ctx);
  return t.pp + t.mm - t.pm - t.mp;
}

double cycle_value(const Behavior& b, const Scenario& scenario) {
  if (!is_cycle(scenario)) fail(errc::validation, "cycle_value: scenario is not a cycle");
  double total = 0.0;
  for (const MeasurementContext& ctx : scenario.contexts) total += correlator(b, ctx);
  return total;
}

double evaluate(const InequalityExpr& expr, const Behavior& b) {
  double total = expr.offset;
  for (const InequalityExpr::Term& term : expr.terms) total += term.coefficient * correlator(b, term.context);
  return total;
}

namespace {

void validate_expr(const Scenario& scenario, const InequalityExpr& expr) {
  for (const InequalityExpr::Term& term : expr.terms) {
    const bool found = std::any_of(scenario.contexts.begin(), scenario.contexts.end(),
                                   [&term](const MeasurementContext& c) { return hv::same_pair(c, term.context); });
    if (!found) fail(errc::missing_context, "inequality: term references a context outside the scenario");
  }
}

double assignment_value(const InequalityExpr& expr, std::uint32_t mask) {
  double total = expr.offset;
  for (const InequalityExpr::Term& term : expr.terms) {
    const int vi = (mask >> (term.context.first - 1)) & 1 ? 1 : -1;
    const int vj = (mask >> (term.context.second - 1)) & 1 ? 1 : -1;
    total += term.coefficient * vi * vj;
  }
  return total;
}

std::vector<int> mask_to_values(std::uint32_t mask, int n) {
  std::vector<int> values(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) values[static_cast<std::size_t>(i)] = (mask >> i) & 1 ? 1 : -1;
  return values;
}

}  // namespace

ClassicalBounds classical_bound(const Scenario& scenario, const InequalityExpr& expr) {
  scenario.validate();
  validate_expr(scenario, expr);
  if (scenario.observables > kMaxEnumerationObservables)
    fail(errc::size_limit, "classical_bound: enumeration capped at 24 observables");

  const std::uint32_t count = std::uint32_t{1} << scenario.observables;
  double best_min = assignment_value(expr, 0);
  double best_max = best_min;
  std::uint32_t argmin = 0, argmax = 0;
  for (std::uint32_t mask = 1; mask < count; ++mask) {
    const double v = assignment_value(expr, mask);
    if (v < best_min) {
      best_min = v;
      argmin = mask;
    }
    if (v > best_max) {
      best_max = v;
      argmax = mask;
    }
  }
  return ClassicalBounds{Bounds{best_min, best_max},
                         DeterministicAssignment(mask_to_values(argmin, scenario.observables)),
                         DeterministicAssignment(mask_to_values(argmax, scenario.observables))};
}

namespace {

// LP layout: per context k the four outcome probabilities occupy variables
// 4k .. 4k+3 in table order (pp, pm, mp, mm).
struct NdLp {
  lp::Problem problem;  // constraints only; cost filled per direction
  std::size_t n_vars = 0;
};

double marginal_sign(const MeasurementContext& ctx, int observable, int slot) {
  // Coefficient of variable `slot` (0..3) in P(observable = +1).
  const bool first = observable == ctx.first;
  switch (slot) {
    case 0: return 1.0;                  // pp
    case 1: return first ? 1.0 : 0.0;    // pm
    case 2: return first ? 0.0 : 1.0;    // mp
    default: return 0.0;                 // mm
  }
}

NdLp build_nd_constraints(const Scenario& scenario) {
  NdLp nd;
  nd.n_vars = 4 * scenario.contexts.size();
  if (nd.n_vars > kMaxLpVariables) fail(errc::size_limit, "nd_bound: LP exceeds variable cap");

  // Normalization per context.
  for (std::size_t k = 0; k < scenario.contexts.size(); ++k) {
    std::vector<double> row(nd.n_vars, 0.0);
    for (int slot = 0; slot < 4; ++slot) row[4 * k + static_cast<std::size_t>(slot)] = 1.0;
    nd.problem.a.push_back(std::move(row));
    nd.problem.b.push_back(1.0);
  }

  // Marginal consistency: chain the contexts containing each observable.
  for (int obs = 1; obs <= scenario.observables; ++obs) {
    std::vector<std::size_t> holders;
    for (std::size_t k = 0; k < scenario.contexts.size(); ++k)
      if (scenario.contexts[k].contains(obs)) holders.push_back(k);
    for (std::size_t h = 1; h < holders.size(); ++h) {
      std::vector<double> row(nd.n_vars, 0.0);
      const std::size_t ka = holders[h - 1];
      const std::size_t kb = holders[h];
      for (int slot = 0; slot < 4; ++slot) {
        row[4 * ka + static_cast<std::size_t>(slot)] += marginal_sign(scenario.contexts[ka], obs, slot);
        row[4 * kb + static_cast<std::size_t>(slot)] -= marginal_sign(scenario.contexts[kb], obs, slot);
      }
      nd.problem.a.push_back(std::move(row));
      nd.problem.b.push_back(0.0);
    }
  }
  return nd;
}

std::vector<double> nd_objective(const Scenario& scenario, const InequalityExpr& expr, std::size_t n_vars) {
  std::vector<double> c(n_vars, 0.0);
  for (const InequalityExpr::Term& term : expr.terms) {
    std::size_t k = scenario.contexts.size();
    bool swapped = false;
    for (std::size_t i = 0; i < scenario.contexts.size(); ++i) {
      if (hv::same_pair(scenario.contexts[i], term.context)) {
        k = i;
        swapped = !(scenario.contexts[i] == term.context);
        break;
      }
    }
    if (k == scenario.contexts.size()) fail(errc::missing_context, "nd_bound: term context missing");
    // Correlator is symmetric under swapping the pair, so orientation does
    // not change the coefficients.
    (void)swapped;
    c[4 * k + 0] += term.coefficient;
    c[4 * k + 1] -= term.coefficient;
    c[4 * k + 2] -= term.coefficient;
    c[4 * k + 3] += term.coefficient;
  }
  return c;
}

Behavior behavior_from_lp(const Scenario& scenario, const std::vector<double>& x) {
  Behavior b;
  b.contexts = scenario.contexts;
  b.tables.resize(scenario.contexts.size());
  for (std::size_t k = 0; k < scenario.contexts.size(); ++k)
    b.tables[k] = hv::ContextTable{x[4 * k + 0], x[4 * k + 1], x[4 * k + 2], x[4 * k + 3]};
  b.validate();
  return b;
}

}  // namespace

NdBounds nd_bound(const Scenario& scenario, const InequalityExpr& expr) {
  scenario.validate();
  validate_expr(scenario, expr);

  const NdLp nd = build_nd_constraints(scenario);
  const std::vector<double> objective = nd_objective(scenario, expr, nd.n_vars);

  lp::Problem min_problem = nd.problem;
  min_problem.c = objective;
  const lp::Solution min_sol = lp::solve(min_problem);
  if (min_sol.status != lp::Status::optimal)
    fail(errc::internal, "nd_bound: no-disturbance polytope LP did not reach an optimum");

  lp::Problem max_problem = nd.problem;
  max_problem.c.assign(objective.size(), 0.0);
  for (std::size_t j = 0; j < objective.size(); ++j) max_problem.c[j] = -objective[j];
  const lp::Solution max_sol = lp::solve(max_problem);
  if (max_sol.status != lp::Status::optimal)
    fail(errc::internal, "nd_bound: no-disturbance polytope LP did not reach an optimum");

  return NdBounds{Bounds{min_sol.objective + expr.offset, -max_sol.objective + expr.offset},
                  behavior_from_lp(scenario, min_sol.x), behavior_from_lp(scenario, max_sol.x)};
}

Bounds arithmetic_bound(const Scenario& scenario, const InequalityExpr& expr) {
  scenario.validate();
  validate_expr(scenario, expr);
  double magnitude = 0.0;
  for (const InequalityExpr::Term& term : expr.terms) magnitude += std::abs(term.coefficient);
  return Bounds{-magnitude + expr.offset, magnitude + expr.offset};
}

BoundsReport bounds_report(const Scenario& scenario, const InequalityExpr& expr) {
  ClassicalBounds classical = classical_bound(scenario, expr);
  NdBounds nd = nd_bound(scenario, expr);
  const Bounds arithmetic = arithmetic_bound(scenario, expr);

  const bool ordered = arithmetic.min <= nd.bounds.min + kLpTol && nd.bounds.min <= classical.bounds.min + kLpTol &&
                       classical.bounds.min <= classical.bounds.max &&
                       classical.bounds.max <= nd.bounds.max + kLpTol && nd.bounds.max <= arithmetic.max + kLpTol;
  if (!ordered) fail(errc::internal, "bounds_report: bound ordering chain violated");

  return BoundsReport{classical.bounds.min, classical.bounds.max,     nd.bounds.min,
                      nd.bounds.max,        arithmetic.min,           arithmetic.max,
                      std::move(classical.argmin), std::move(classical.argmax),
                      std::move(nd.argmin), std::move(nd.argmax)};
}

nlohmann::json bounds_report_to_json(const BoundsReport& r) {
  return {{"classical_min", r.classical_min},
          {"classical_max", r.classical_max},
          {"nd_min", r.nd_min},
          {"nd_max", r.nd_max},
          {"arithmetic_min", r.arithmetic_min},
          {"arithmetic_max", r.arithmetic_max},
          {"classical_argmin", r.classical_argmin.values()},
          {"classical_argmax", r.classical_argmax.values()},
          {"nd_argmin", hv::behavior_to_json(r.nd_argmin)},
          {"nd_argmax", hv::behavior_to_json(r.nd_argmax)}};
}

NoDisturbanceReport no_disturbance_check(const Behavior& b, double tol) {
  b.validate();
  std::map<int, std::pair<double, double>> extremes;  // observable -> (min, max) marginal
  for (std::size_t k = 0; k < b.contexts.size(); ++k) {
    for (const int obs : {b.contexts[k].first, b.contexts[k].second}) {
      const double m = b.marginal_plus(obs, k);
      auto [it, inserted] = extremes.try_emplace(obs, m, m);
      if (!inserted) {
        it->second.first = std::min(it->second.first, m);
        it->second.second = std::max(it->second.second, m);
      }
    }
  }

  NoDisturbanceReport report;
  report.pass = true;
  for (const auto& [obs, mm] : extremes) {
    const double gap = mm.second - mm.first;
    if (gap > report.max_gap) {
      report.max_gap = gap;
      report.worst_observable = obs;
    }
  }
  if (report.worst_observable == 0 && !extremes.empty()) report.worst_observable = extremes.begin()->first;
  report.pass = report.max_gap <= tol;
  return report;
}

int Event::value_of(int observable) const {
  if (observable == context.first) return value_first;
  if (observable == context.second) return value_second;
  fail(errc::validation, "event: observable not in context");
}

void Event::validate() const {
  if (context.first == context.second) fail(errc::validation, "event: context must pair distinct observables");
  for (int v : {value_first, value_second})
    if (v != 1 && v != -1) fail(errc::validation, "event: values must be +1 or -1");
}

bool are_exclusive(const Event& e1, const Event& e2) {
  e1.validate();
  e2.validate();
  for (const int obs : {e1.context.first, e1.context.second})
    if (e2.involves(obs) && e1.value_of(obs) != e2.value_of(obs)) return true;
  return false;
}

ExclusivitySum exclusivity_sum(const Behavior& b, const std::vector<Event>& events) {
  ExclusivitySum result;
  for (const Event& e : events) {
    e.validate();
    const hv::ContextTable t = b.table_for(e.context);  // throws if context missing
    const double p = t.entry(e.value_first, e.value_second);
    result.event_probabilities.push_back(p);
    result.sum += p;
  }
  result.pairwise_exclusive = true;
  for (std::size_t i = 0; i < events.size() && result.pairwise_exclusive; ++i)
    for (std::size_t j = i + 1; j < events.size(); ++j)
      if (!are_exclusive(events[i], events[j])) {
        result.pairwise_exclusive = false;
        break;
      }
  result.satisfies_principle = result.sum <= 1.0 + kExclusivityTol;
  return result;
}

ProjectorSum projector_exclusivity_sum(const std::vector<cdouble>& state, const std::vector<CMatrix>& projectors) {
  if (state.empty()) fail(errc::validation, "projector sum: empty state");
  if (std::abs(norm2(state) - 1.0) > kProjectorTol) fail(errc::validation, "projector sum: state is not normalized");

  for (const CMatrix& p : projectors) {
    if (!p.square() || p.rows() != state.size())
      fail(errc::shape, "projector sum: projector dimension does not match state");
    if (p.max_abs_diff(p.adjoint()) > kProjectorTol)
      fail(errc::validation, "projector sum: matrix is not self-adjoint");
    if ((p * p).max_abs_diff(p) > kProjectorTol) fail(errc::validation, "projector sum: matrix is not idempotent");
  }

  ProjectorSum result;
  result.orthogonal = true;
  for (std::size_t i = 0; i < projectors.size() && result.orthogonal; ++i)
    for (std::size_t j = i + 1; j < projectors.size(); ++j)
      if ((projectors[i] * projectors[j]).max_abs() > kProjectorTol) {
        result.orthogonal = false;
        break;
      }
  for (const CMatrix& p : projectors) result.sum += inner(state, apply(p, state)).real();
  return result;
}

Event event_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("context") || !j.contains("values"))
    fail(errc::validation, "event json: expected object with context/values");
  const auto& c = j["context"];
  if (!c.is_array() || c.size() != 2) fail(errc::validation, "event json: context must be a pair");
  Event e;
  e.context = {c[0].get<int>(), c[1].get<int>()};
  const auto& values = j["values"];
  const std::string key_first = std::to_string(e.context.first);
  const std::string key_second = std::to_string(e.context.second);
  if (!values.is_object() || !values.contains(key_first) || !values.contains(key_second))
    fail(errc::validation, "event json: values must assign both context observables");
  e.value_first = values[key_first].get<int>();
  e.value_second = values[key_second].get<int>();
  e.validate();
  return e;
}

nlohmann::json event_to_json(const Event& e) {
  nlohmann::json values;
  values[std::to_string(e.context.first)] = e.value_first;
  values[std::to_string(e.context.second)] = e.value_second;
  return {{"context", {e.context.first, e.context.second}}, {"values", std::move(values)}};
}

}  // namespace ctxlab::ineq
