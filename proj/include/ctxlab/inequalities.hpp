#ifndef CTXLAB_INEQUALITIES_HPP
#define CTXLAB_INEQUALITIES_HPP

#include <vector>

#include "ctxlab/cmatrix.hpp"
#include "ctxlab/hv.hpp"

namespace ctxlab::ineq {

using hv::Behavior;
using hv::DeterministicAssignment;
using hv::MeasurementContext;
using hv::Scenario;

inline constexpr int kMaxEnumerationObservables = 24;
inline constexpr std::size_t kMaxLpVariables = 1000;
inline constexpr double kLpTol = 1e-7;
inline constexpr double kExclusivityTol = 1e-10;
inline constexpr double kProjectorTol = 1e-10;

// KCBS quantum optimum 5 - 4*sqrt(5) for the 5-cycle correlator sum; kept as
// a reference constant, not computed here.
inline const double kKcbsQuantumMin = -3.9442719099991587856;

// n-cycle of contexts (1,2), (2,3), ..., (n,1). n = 5 is the KCBS scenario,
// n = 3 the Specker triangle. Every observable appears in exactly two
// contexts; n = 2 would repeat a pair and is rejected.
Scenario cycle_scenario(int n);
bool is_cycle(const Scenario& scenario);

// Linear expression over context correlators <A_i A_j>, plus a constant.
struct InequalityExpr {
  struct Term {
    MeasurementContext context;
    double coefficient = 1.0;
  };
  std::vector<Term> terms;
  double offset = 0.0;

  static InequalityExpr correlator_sum(const Scenario& scenario);
};

// <A_i A_j> = p(++) + p(--) - p(+-) - p(-+).
double correlator(const Behavior& b, const MeasurementContext& ctx);

// Sum of correlators along the cycle's edges.
double cycle_value(const Behavior& b, const Scenario& scenario);

double evaluate(const InequalityExpr& expr, const Behavior& b);

struct Bounds {
  double min = 0.0;
  double max = 0.0;
};

struct ClassicalBounds {
  Bounds bounds;
  DeterministicAssignment argmin, argmax;
};

// Exact extrema over all 2^n deterministic noncontextual assignments.
ClassicalBounds classical_bound(const Scenario& scenario, const InequalityExpr& expr);

struct NdBounds {
  Bounds bounds;
  Behavior argmin, argmax;
};

// Extrema over the no-disturbance polytope (normalization, non-negativity,
// marginal consistency across shared observables) via the dense simplex.
NdBounds nd_bound(const Scenario& scenario, const InequalityExpr& expr);

// Term-wise extremes: every correlator pushed independently to +-1.
Bounds arithmetic_bound(const Scenario& scenario, const InequalityExpr& expr);

struct BoundsReport {
  double classical_min = 0.0, classical_max = 0.0;
  double nd_min = 0.0, nd_max = 0.0;
  double arithmetic_min = 0.0, arithmetic_max = 0.0;
  DeterministicAssignment classical_argmin, classical_argmax;
  Behavior nd_argmin, nd_argmax;
};

// All three bound pairs; checks the ordering chain
// arithmetic <= nd <= classical on both sides (within LP tolerance).
BoundsReport bounds_report(const Scenario& scenario, const InequalityExpr& expr);
nlohmann::json bounds_report_to_json(const BoundsReport& r);

struct NoDisturbanceReport {
  bool pass = false;
  int worst_observable = 0;
  double max_gap = 0.0;
};

// Pass iff every observable's marginal agrees across all contexts containing
// it, within tol.
NoDisturbanceReport no_disturbance_check(const Behavior& b, double tol);

// An outcome assignment within one context.
struct Event {
  MeasurementContext context;
  int value_first = 0;
  int value_second = 0;

  bool involves(int observable) const { return context.contains(observable); }
  int value_of(int observable) const;
  void validate() const;
};

// Counterfactual exclusivity: the events share at least one observable to
// which they assign different values. Deliberately NOT the orthogonal
// projector notion; projector_exclusivity_sum covers that one.
bool are_exclusive(const Event& e1, const Event& e2);

struct ExclusivitySum {
  double sum = 0.0;
  bool pairwise_exclusive = false;
  bool satisfies_principle = false;  // sum <= 1 + 1e-10
  std::vector<double> event_probabilities;
};

ExclusivitySum exclusivity_sum(const Behavior& b, const std::vector<Event>& events);

struct ProjectorSum {
  double sum = 0.0;
  bool orthogonal = false;
};

// Validates each P (P^2 = P = P^dag within 1e-10), reports whether the set is
// pairwise orthogonal, and sums <state|P_i|state>.
ProjectorSum projector_exclusivity_sum(const std::vector<cdouble>& state, const std::vector<CMatrix>& projectors);

// Events on the wire: {"context": [i,j], "values": {"<i>": +-1, "<j>": +-1}}.
Event event_from_json(const nlohmann::json& j);
nlohmann::json event_to_json(const Event& e);

}  // namespace ctxlab::ineq

#endif
