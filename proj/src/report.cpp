#include "ctxlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "ctxlab/errors.hpp"
#include "ctxlab/fock.hpp"
#include "ctxlab/hv.hpp"
#include "ctxlab/inequalities.hpp"
#include "ctxlab/rng.hpp"
#include "ctxlab/version.hpp"

namespace ctxlab::cli {

using nlohmann::json;

namespace {

std::string timestamp_utc() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_atomic(const std::string& path, const std::string& payload) {
  if (path.empty() || path == "-") {
    std::cout << payload;
    return;
  }
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp(target);
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << payload;
    if (!out) fail(errc::internal, "cannot write report to " + tmp.string());
  }
  fs::rename(tmp, target);
}

const json& require(const json& j, const char* key, const char* where) {
  if (!j.is_object() || !j.contains(key))
    fail(errc::validation, std::string(where) + ": missing required field '" + key + "'");
  return j[key];
}

std::uint64_t get_u64(const json& j, const char* key, std::uint64_t fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_unsigned() && !j[key].is_number_integer())
    fail(errc::validation, std::string("field '") + key + "' must be a non-negative integer");
  const auto v = j[key].get<std::int64_t>();
  if (v < 0) fail(errc::validation, std::string("field '") + key + "' must be non-negative");
  return static_cast<std::uint64_t>(v);
}

struct OpLog {
  std::set<std::string> ops;
  void add(const char* name) { ops.insert(name); }
  json to_json() const { return json(std::vector<std::string>(ops.begin(), ops.end())); }
};

fock::ModeUnitary unitary_from_payload(const json& j) {
  if (j.is_string()) {
    const std::string name = j.get<std::string>();
    if (name == "beam_splitter_5050") return fock::ModeUnitary::beam_splitter_5050();
    fail(errc::validation, "unitary: unknown shorthand '" + name + "'");
  }
  return fock::unitary_from_json(j);
}

json run_quantum(const json& payload, OpLog& ops) {
  const fock::ModeUnitary u = unitary_from_payload(require(payload, "unitary", "quantum scenario"));
  const fock::FockState input = fock::fock_state_from_json(require(payload, "input", "quantum scenario"), u.dim());

  json results;
  const fock::OutcomeDistribution dist = fock::output_distribution(u, input);
  ops.add("output_distribution");
  ops.add("permanent");
  results["distribution"] = fock::distribution_to_json(dist);

  if (payload.contains("transitions")) {
    json rows = json::array();
    for (const auto& out_json : payload["transitions"]) {
      const fock::FockState out = fock::fock_state_from_json(out_json, u.dim());
      rows.push_back({{"output", out.occupations}, {"p", fock::transition_probability(u, input, out)}});
    }
    ops.add("transition_probability");
    results["transitions"] = std::move(rows);
  }

  if (payload.contains("marginal_modes")) {
    json rows = json::array();
    for (const auto& mode_json : payload["marginal_modes"]) {
      const int mode = mode_json.get<int>();
      rows.push_back({{"mode", mode}, {"value", fock::per_photon_marginal(dist, mode)}});
    }
    ops.add("per_photon_marginal");
    results["marginals"] = std::move(rows);
  }

  if (payload.contains("no_signalling")) {
    const json& ns = payload["no_signalling"];
    const fock::FockState base = fock::fock_state_from_json(require(ns, "base_input", "no_signalling"), u.dim());
    const fock::FockState added = fock::fock_state_from_json(require(ns, "added_input", "no_signalling"), u.dim());
    const int mode = require(ns, "mode", "no_signalling").get<int>();
    const fock::NoSignallingReport report = fock::no_signalling_report(u, base, added, mode);
    ops.add("no_signalling_report");
    ops.add("per_photon_marginal");
    results["no_signalling"] = {{"mode", mode},
                                {"marginal_base", report.marginal_base},
                                {"marginal_added", report.marginal_added},
                                {"difference", report.difference}};
  }
  return results;
}

hv::Scenario scenario_from_payload(const json& j) {
  if (j.is_object() && j.contains("cycle")) {
    const int n = j["cycle"].get<int>();
    return ineq::cycle_scenario(n);
  }
  return hv::scenario_from_json(j);
}

json witness_to_json(const std::optional<hv::ContextWitness>& w) {
  if (!w) return {{"context_dependent", false}};
  return {{"context_dependent", true},
          {"observable", w->observable},
          {"context_a", {w->ctx_a.first, w->ctx_a.second}},
          {"value_a", w->value_a},
          {"context_b", {w->ctx_b.first, w->ctx_b.second}},
          {"value_b", w->value_b}};
}

json run_hidden_variable(const json& payload, std::uint64_t seed, std::optional<std::uint64_t> samples_override,
                         OpLog& ops) {
  const hv::Scenario scenario = scenario_from_payload(require(payload, "scenario", "hidden-variable scenario"));
  const hv::LambdaLaw law =
      payload.contains("law") ? hv::lambda_law_from_json(payload["law"]) : hv::LambdaLaw{};

  json results;
  const hv::Behavior exact = hv::lambda_exact_behavior(scenario, law);
  ops.add("lambda_exact_behavior");
  results["exact_behavior"] = hv::behavior_to_json(exact);

  std::uint64_t samples = get_u64(payload, "samples", 0);
  if (samples_override) samples = *samples_override;
  if (samples > 0) {
    const hv::Behavior sampled = hv::lambda_sample_behavior(scenario, samples, seed, law);
    ops.add("lambda_sample_behavior");
    results["sampled_behavior"] = hv::behavior_to_json(sampled);
  }

  if (payload.contains("lambdas")) {
    const hv::HiddenLambdaState state(payload["lambdas"].get<std::vector<double>>());
    if (state.size() != scenario.observables)
      fail(errc::validation, "hidden-variable scenario: lambdas length must equal observables");
    json rows = json::array();
    for (const hv::MeasurementContext& ctx : scenario.contexts) {
      const auto [vi, vj] = hv::lambda_model_outcome(state, ctx);
      json values;
      values[std::to_string(ctx.first)] = vi;
      values[std::to_string(ctx.second)] = vj;
      rows.push_back({{"context", {ctx.first, ctx.second}}, {"values", std::move(values)}});
    }
    ops.add("lambda_model_outcome");
    results["lambda_outcomes"] = std::move(rows);

    if (payload.contains("witness")) {
      const json& w = payload["witness"];
      const int observable = require(w, "observable", "witness").get<int>();
      const auto& ca = require(w, "context_a", "witness");
      const auto& cb = require(w, "context_b", "witness");
      const hv::MeasurementContext ctx_a{ca[0].get<int>(), ca[1].get<int>()};
      const hv::MeasurementContext ctx_b{cb[0].get<int>(), cb[1].get<int>()};
      ops.add("context_dependence_witness");
      results["witness"] = witness_to_json(hv::context_dependence_witness(state, observable, ctx_a, ctx_b));
    }
  } else if (payload.contains("witness")) {
    fail(errc::validation, "hidden-variable scenario: witness requires lambdas");
  }

  if (payload.contains("assignment")) {
    const hv::DeterministicAssignment assignment(payload["assignment"].get<std::vector<int>>());
    ops.add("deterministic_behavior");
    results["deterministic_behavior"] = hv::behavior_to_json(hv::deterministic_behavior(assignment, scenario));
  }
  return results;
}

hv::Behavior behavior_from_payload(const json& j, const hv::Scenario& scenario, std::uint64_t seed,
                                   std::optional<std::uint64_t> samples_override, OpLog& ops) {
  const std::string source = require(j, "source", "behavior").get<std::string>();
  if (source == "lambda-exact") {
    ops.add("lambda_exact_behavior");
    const hv::LambdaLaw law = j.contains("law") ? hv::lambda_law_from_json(j["law"]) : hv::LambdaLaw{};
    return hv::lambda_exact_behavior(scenario, law);
  }
  if (source == "lambda-sample") {
    ops.add("lambda_sample_behavior");
    const hv::LambdaLaw law = j.contains("law") ? hv::lambda_law_from_json(j["law"]) : hv::LambdaLaw{};
    std::uint64_t samples = get_u64(j, "samples", 10000);
    if (samples_override) samples = *samples_override;
    return hv::lambda_sample_behavior(scenario, samples, seed, law);
  }
  if (source == "deterministic") {
    ops.add("deterministic_behavior");
    const hv::DeterministicAssignment assignment(require(j, "values", "behavior").get<std::vector<int>>());
    return hv::deterministic_behavior(assignment, scenario);
  }
  if (source == "tables") {
    return hv::behavior_from_json(require(j, "tables", "behavior"));
  }
  fail(errc::validation, "behavior: unknown source '" + source + "'");
}

ineq::InequalityExpr expr_from_payload(const json& j, const hv::Scenario& scenario) {
  if (j.is_object() && j.contains("correlator_sum") && j["correlator_sum"].get<bool>())
    return ineq::InequalityExpr::correlator_sum(scenario);
  ineq::InequalityExpr expr;
  for (const auto& term : require(j, "terms", "inequality")) {
    const auto& c = require(term, "context", "inequality term");
    expr.terms.push_back({{c[0].get<int>(), c[1].get<int>()}, term.value("coefficient", 1.0)});
  }
  if (j.contains("offset")) expr.offset = j["offset"].get<double>();
  return expr;
}

json run_bounds(const json& payload, std::uint64_t seed, std::optional<std::uint64_t> samples_override,
                double nd_tolerance, OpLog& ops) {
  const hv::Scenario scenario = scenario_from_payload(require(payload, "scenario", "bounds scenario"));

  json results;
  results["scenario"] = hv::scenario_to_json(scenario);

  std::optional<hv::Behavior> behavior;
  if (payload.contains("behavior"))
    behavior = behavior_from_payload(payload["behavior"], scenario, seed, samples_override, ops);

  if (behavior) {
    json correlators = json::array();
    for (const hv::MeasurementContext& ctx : scenario.contexts) {
      correlators.push_back({{"context", {ctx.first, ctx.second}}, {"value", ineq::correlator(*behavior, ctx)}});
    }
    ops.add("correlator");
    results["behavior"] = hv::behavior_to_json(*behavior);
    results["correlators"] = std::move(correlators);

    const ineq::NoDisturbanceReport nd = ineq::no_disturbance_check(*behavior, nd_tolerance);
    ops.add("no_disturbance_check");
    results["no_disturbance"] = {{"pass", nd.pass},
                                 {"worst_observable", nd.worst_observable},
                                 {"max_gap", nd.max_gap},
                                 {"tolerance", nd_tolerance}};
  }

  if (payload.contains("inequality")) {
    const ineq::InequalityExpr expr = expr_from_payload(payload["inequality"], scenario);
    if (behavior) {
      double value;
      if (ineq::is_cycle(scenario) && payload["inequality"].is_object() &&
          payload["inequality"].value("correlator_sum", false)) {
        value = ineq::cycle_value(*behavior, scenario);
        ops.add("cycle_value");
      } else {
        value = ineq::evaluate(expr, *behavior);
      }
      results["value"] = value;
    }
    const ineq::BoundsReport bounds = ineq::bounds_report(scenario, expr);
    ops.add("classical_bound");
    ops.add("nd_bound");
    ops.add("arithmetic_bound");
    results["bounds"] = ineq::bounds_report_to_json(bounds);
  }

  if (payload.contains("events")) {
    if (!behavior) fail(errc::validation, "bounds scenario: events need a behavior");
    std::vector<ineq::Event> events;
    for (const auto& e : payload["events"]) events.push_back(ineq::event_from_json(e));
    const ineq::ExclusivitySum ex = ineq::exclusivity_sum(*behavior, events);
    ops.add("exclusivity_sum");
    ops.add("are_exclusive");
    results["exclusivity"] = {{"sum", ex.sum},
                              {"pairwise_exclusive", ex.pairwise_exclusive},
                              {"satisfies_principle", ex.satisfies_principle},
                              {"event_probabilities", ex.event_probabilities}};
  }

  if (payload.contains("projectors")) {
    const json& pj = payload["projectors"];
    const json& state_json = require(pj, "state", "projectors");
    const auto re = require(state_json, "re", "projector state").get<std::vector<double>>();
    const auto im = require(state_json, "im", "projector state").get<std::vector<double>>();
    if (re.size() != im.size()) fail(errc::validation, "projector state: re/im lengths differ");
    std::vector<cdouble> state(re.size());
    for (std::size_t i = 0; i < re.size(); ++i) state[i] = cdouble(re[i], im[i]);
    std::vector<CMatrix> set;
    for (const auto& m : require(pj, "set", "projectors")) set.push_back(fock::matrix_from_json(m));
    const ineq::ProjectorSum ps = ineq::projector_exclusivity_sum(state, set);
    ops.add("projector_exclusivity_sum");
    results["projectors"] = {{"sum", ps.sum}, {"orthogonal", ps.orthogonal}};
  }
  return results;
}

// ---------------------------------------------------------------------------
// reproduce-reply rows
// ---------------------------------------------------------------------------

struct Row {
  std::string quantity;
  double value = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool upper_bound = false;  // MATCH iff value <= expected + tolerance
  std::string provenance;
  bool match = false;
};

class RowTable {
 public:
  explicit RowTable(std::string inject_fault) : inject_fault_(std::move(inject_fault)) {}

  void eq(const std::string& quantity, double value, double expected, double tol, const std::string& provenance) {
    push(quantity, value, expected, tol, false, provenance);
  }
  void le(const std::string& quantity, double value, double bound, double tol, const std::string& provenance) {
    push(quantity, value, bound, tol, true, provenance);
  }

  bool all_match() const {
    return std::all_of(rows_.begin(), rows_.end(), [](const Row& r) { return r.match; });
  }

  json to_json() const {
    json rows = json::array();
    for (const Row& r : rows_) {
      rows.push_back({{"quantity", r.quantity},
                      {"value", r.value},
                      {"expected", r.expected},
                      {"tolerance", r.tolerance},
                      {"comparison", r.upper_bound ? "le" : "eq"},
                      {"provenance", r.provenance},
                      {"status", r.match ? "MATCH" : "MISMATCH"}});
    }
    return rows;
  }

 private:
  void push(const std::string& quantity, double value, double expected, double tol, bool upper,
            const std::string& provenance) {
    if (quantity == inject_fault_) value += 1.0;
    Row r{quantity, value, expected, tol, upper, provenance, false};
    r.match = upper ? value <= expected + tol : std::abs(value - expected) <= tol;
    rows_.push_back(std::move(r));
  }

  std::string inject_fault_;
  std::vector<Row> rows_;
};

double scaled_mc_tolerance(std::uint64_t samples) {
  // 0.02 at 10^6 samples, scaling like 1/sqrt(n).
  const double tol = 0.02 * std::sqrt(1e6 / static_cast<double>(samples));
  return std::max(tol, 1e-9);
}

void projector_sweep(std::uint64_t seed, int trials, double& max_sum, bool& all_orthogonal) {
  CounterRng rng(seed, 999);
  max_sum = 0.0;
  all_orthogonal = true;
  for (int trial = 0; trial < trials; ++trial) {
    const std::size_t dim = 2 + rng.next_u64() % 5;  // 2..6
    const CMatrix u = random_unitary(dim, rng);
    const std::size_t groups = 2 + rng.next_u64() % (dim - 1);     // 2..dim
    const std::size_t used = groups + rng.next_u64() % (dim - groups + 1);  // groups..dim
    std::vector<CMatrix> projectors(groups, CMatrix(dim, dim));
    for (std::size_t col = 0; col < used; ++col) {
      CMatrix& p = projectors[col % groups];
      for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c) p(r, c) += u(r, col) * std::conj(u(c, col));
    }
    const std::vector<cdouble> state = random_state(dim, rng);
    const ineq::ProjectorSum ps = ineq::projector_exclusivity_sum(state, projectors);
    max_sum = std::max(max_sum, ps.sum);
    all_orthogonal = all_orthogonal && ps.orthogonal;
  }
}

RowTable build_reproduce_rows(const ReproduceOptions& options) {
  RowTable rows(options.inject_fault);

  // Two-photon bunching through the 50:50 beam splitter.
  const fock::ModeUnitary bs = fock::ModeUnitary::beam_splitter_5050();
  const fock::FockState one_one{{1, 1}};
  rows.eq("hom.p_out_2_0", fock::transition_probability(bs, one_one, fock::FockState{{2, 0}}), 0.5, 1e-10,
          "permanent amplitude");
  rows.eq("hom.p_out_0_2", fock::transition_probability(bs, one_one, fock::FockState{{0, 2}}), 0.5, 1e-10,
          "permanent amplitude");
  rows.eq("hom.p_out_1_1", fock::transition_probability(bs, one_one, fock::FockState{{1, 1}}), 0.0, 1e-10,
          "permanent amplitude");

  // Adding a photon in the other port leaves the 50 % marginal untouched.
  const fock::NoSignallingReport ns =
      fock::no_signalling_report(bs, fock::FockState{{1, 0}}, one_one, 0);
  rows.eq("nosig.marginal_base", ns.marginal_base, 0.5, 1e-10, "expected photon fraction");
  rows.eq("nosig.marginal_added", ns.marginal_added, 0.5, 1e-10, "expected photon fraction");
  rows.eq("nosig.difference", ns.difference, 0.0, 1e-10, "expected photon fraction");

  // Lambda-ordering model, exact single-shot behavior.
  const hv::Scenario kcbs = ineq::cycle_scenario(5);
  const hv::Behavior lambda_kcbs = hv::lambda_exact_behavior(kcbs);
  double table_dev = 0.0;
  for (const hv::ContextTable& t : lambda_kcbs.tables) {
    table_dev = std::max({table_dev, std::abs(t.pp), std::abs(t.pm - 0.5), std::abs(t.mp - 0.5), std::abs(t.mm)});
  }
  rows.eq("lambda.table_deviation", table_dev, 0.0, 1e-12, "order statistics");
  rows.eq("lambda.marginal_gap", ineq::no_disturbance_check(lambda_kcbs, 1e-12).max_gap, 0.0, 0.0,
          "order statistics");

  // Context dependence of A_2 for lambda_1 < lambda_2 < lambda_3.
  const hv::HiddenLambdaState ordered({0.2, 0.5, 0.9});
  const auto witness =
      hv::context_dependence_witness(ordered, 2, hv::MeasurementContext{2, 3}, hv::MeasurementContext{1, 2});
  rows.eq("witness.a2_in_ctx_2_3", witness ? witness->value_a : 0.0, -1.0, 0.0, "order statistics");
  rows.eq("witness.a2_in_ctx_1_2", witness ? witness->value_b : 0.0, 1.0, 0.0, "order statistics");

  // KCBS 5-cycle: value and the full bound chain.
  const ineq::InequalityExpr kcbs_expr = ineq::InequalityExpr::correlator_sum(kcbs);
  rows.eq("kcbs.value_exact", ineq::cycle_value(lambda_kcbs, kcbs), -5.0, 1e-12, "closed form");
  const hv::Behavior sampled = hv::lambda_sample_behavior(kcbs, options.samples, options.seed);
  rows.eq("kcbs.value_sampled", ineq::cycle_value(sampled, kcbs), -5.0, scaled_mc_tolerance(options.samples),
          "Monte Carlo");
  const ineq::BoundsReport kcbs_bounds = ineq::bounds_report(kcbs, kcbs_expr);
  rows.eq("kcbs.classical_min", kcbs_bounds.classical_min, -3.0, 1e-12, "exhaustive enumeration");
  rows.eq("kcbs.classical_max", kcbs_bounds.classical_max, 5.0, 1e-12, "exhaustive enumeration");
  rows.eq("kcbs.nd_min", kcbs_bounds.nd_min, -5.0, 1e-7, "linear program");
  rows.eq("kcbs.nd_max", kcbs_bounds.nd_max, 5.0, 1e-7, "linear program");
  rows.eq("kcbs.arithmetic_min", kcbs_bounds.arithmetic_min, -5.0, 1e-12, "arithmetic extremes");
  rows.eq("kcbs.arithmetic_max", kcbs_bounds.arithmetic_max, 5.0, 1e-12, "arithmetic extremes");
  rows.eq("kcbs.classical_argmin_value",
          ineq::evaluate(kcbs_expr, hv::deterministic_behavior(kcbs_bounds.classical_argmin, kcbs)), -3.0, 1e-12,
          "exhaustive enumeration");
  rows.eq("kcbs.nd_argmin_value", ineq::evaluate(kcbs_expr, kcbs_bounds.nd_argmin), -5.0, 1e-7, "linear program");
  rows.eq("kcbs.nd_gap", ineq::no_disturbance_check(lambda_kcbs, 1e-12).max_gap, 0.0, 0.0, "order statistics");

  // Specker triangle.
  const hv::Scenario triangle = ineq::cycle_scenario(3);
  const hv::Behavior lambda_triangle = hv::lambda_exact_behavior(triangle);
  const ineq::InequalityExpr triangle_expr = ineq::InequalityExpr::correlator_sum(triangle);
  rows.eq("specker.value_exact", ineq::cycle_value(lambda_triangle, triangle), -3.0, 1e-12, "closed form");
  const ineq::BoundsReport triangle_bounds = ineq::bounds_report(triangle, triangle_expr);
  rows.eq("specker.classical_min", triangle_bounds.classical_min, -1.0, 1e-12, "exhaustive enumeration");
  rows.eq("specker.nd_min", triangle_bounds.nd_min, -3.0, 1e-7, "linear program");
  rows.eq("specker.arithmetic_min", triangle_bounds.arithmetic_min, -3.0, 1e-12, "arithmetic extremes");

  // Exclusivity sums under the lambda model.
  const std::vector<ineq::Event> within_context = {{{1, 2}, +1, -1}, {{1, 2}, -1, +1}};
  rows.eq("exclusivity.context_pair_sum", ineq::exclusivity_sum(lambda_triangle, within_context).sum, 1.0, 1e-12,
          "closed form");
  const std::vector<ineq::Event> triangle_events = {{{1, 2}, +1, -1}, {{2, 3}, +1, -1}, {{3, 1}, +1, -1}};
  const ineq::ExclusivitySum ex = ineq::exclusivity_sum(lambda_triangle, triangle_events);
  rows.eq("exclusivity.triangle_sum", ex.sum, 1.5, 1e-12, "closed form");
  rows.eq("exclusivity.triangle_pairwise_exclusive", ex.pairwise_exclusive ? 1.0 : 0.0, 1.0, 0.0, "closed form");
  rows.eq("exclusivity.triangle_satisfies_principle", ex.satisfies_principle ? 1.0 : 0.0, 0.0, 0.0, "closed form");

  // Projector-expressed events: resolution of identity and a random sweep.
  const std::size_t dim = 4;
  std::vector<CMatrix> basis_projectors;
  for (std::size_t i = 0; i < dim; ++i) {
    CMatrix p(dim, dim);
    p(i, i) = 1.0;
    basis_projectors.push_back(std::move(p));
  }
  const std::vector<cdouble> balanced = {{0.5, 0.0}, {0.0, 0.5}, {0.5, 0.0}, {0.0, 0.5}};
  rows.eq("projector.basis_resolution", ineq::projector_exclusivity_sum(balanced, basis_projectors).sum, 1.0, 1e-10,
          "projector algebra");
  double max_sum = 0.0;
  bool all_orthogonal = false;
  projector_sweep(options.seed, 1000, max_sum, all_orthogonal);
  rows.eq("projector.random_sets_orthogonal", all_orthogonal ? 1.0 : 0.0, 1.0, 0.0, "projector algebra");
  rows.le("projector.random_max_sum", max_sum, 1.0, 1e-10, "projector algebra");

  return rows;
}

json reproduce_report(const ReproduceOptions& options, const RowTable& rows) {
  return {{"kind", "full-report"},
          {"provenance",
           {{"version", kVersion}, {"seed", options.seed}, {"samples", options.samples}, {"timestamp", timestamp_utc()}}},
          {"operations", json(all_engine_operations())},
          {"rows", rows.to_json()},
          {"all_match", rows.all_match()}};
}

// ---------------------------------------------------------------------------
// CSV rendering
// ---------------------------------------------------------------------------

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    out += c;
  }
  out += "\"";
  return out;
}

std::string number_to_string(const json& v) { return v.dump(); }

void flatten(const json& j, const std::string& prefix,
             std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items())
      flatten(value, prefix.empty() ? key : prefix + "." + key, out);
    return;
  }
  if (j.is_array()) {
    const bool all_scalar = std::all_of(j.begin(), j.end(), [](const json& v) { return !v.is_structured(); });
    if (all_scalar) {
      out.emplace_back(prefix, j.dump());
      return;
    }
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
    return;
  }
  out.emplace_back(prefix, number_to_string(j));
}

}  // namespace

const std::vector<std::string>& all_engine_operations() {
  static const std::vector<std::string> ops = {
      "permanent",          "transition_probability", "output_distribution",       "per_photon_marginal",
      "no_signalling_report", "lambda_model_outcome", "lambda_exact_behavior",     "lambda_sample_behavior",
      "deterministic_behavior", "context_dependence_witness", "correlator",        "cycle_value",
      "classical_bound",    "nd_bound",               "arithmetic_bound",          "no_disturbance_check",
      "are_exclusive",      "exclusivity_sum",        "projector_exclusivity_sum"};
  return ops;
}

std::string report_to_csv(const json& report) {
  std::ostringstream out;
  out << "quantity,value,expected,provenance,status\n";
  if (report.contains("rows")) {
    for (const auto& row : report["rows"]) {
      std::string expected = number_to_string(row["expected"]);
      if (row["comparison"].get<std::string>() == "le") expected = "<=" + expected;
      out << csv_escape(row["quantity"].get<std::string>()) << "," << number_to_string(row["value"]) << ","
          << csv_escape(expected) << "," << csv_escape(row["provenance"].get<std::string>()) << ","
          << row["status"].get<std::string>() << "\n";
    }
    return out.str();
  }
  std::vector<std::pair<std::string, std::string>> flat;
  if (report.contains("results")) flatten(report["results"], "results", flat);
  for (const auto& [quantity, value] : flat)
    out << csv_escape(quantity) << "," << csv_escape(value) << ",,,\n";
  return out.str();
}

namespace {

std::string render(const json& report, const std::string& format) {
  if (format == "json") return report.dump(2) + "\n";
  if (format == "csv") return report_to_csv(report);
  fail(errc::validation, "unknown output format '" + format + "' (expected json or csv)");
}

int map_error_to_exit(const Error& e) {
  switch (e.code()) {
    case errc::size_limit: return kExitResource;
    case errc::internal: return kExitFailure;
    default: return kExitValidation;
  }
}

}  // namespace

ReproduceResult reproduce_reply(const ReproduceOptions& options) {
  const RowTable rows = build_reproduce_rows(options);
  return ReproduceResult{reproduce_report(options, rows), rows.all_match()};
}

int run_reproduce(const ReproduceOptions& options) {
  try {
    const ReproduceResult result = reproduce_reply(options);
    write_atomic(options.out_path, render(result.report, options.format));
    if (!result.all_match) {
      std::cerr << "reproduce-reply: one or more rows MISMATCH\n";
      return kExitFailure;
    }
    return kExitOk;
  } catch (const Error& e) {
    std::cerr << "error (" << errc_name(e.code()) << "): " << e.what() << "\n";
    return map_error_to_exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

int run(const RunOptions& options) {
  json scenario;
  try {
    std::ifstream in(options.scenario_path);
    if (!in) {
      std::cerr << "error: cannot open scenario file " << options.scenario_path << "\n";
      return kExitParse;
    }
    scenario = json::parse(in);
  } catch (const json::parse_error& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  }

  try {
    const std::string kind = require(scenario, "kind", "scenario").get<std::string>();
    std::uint64_t seed = get_u64(scenario, "seed", 0);
    if (options.seed_override) seed = *options.seed_override;
    const double nd_tolerance = options.tolerance_override.value_or(scenario.value("no_disturbance_tolerance", 1e-10));

    OpLog ops;
    json results;

    if (kind == "quantum") {
      results = run_quantum(scenario, ops);
    } else if (kind == "hidden-variable") {
      results = run_hidden_variable(scenario, seed, options.samples_override, ops);
    } else if (kind == "bounds") {
      results = run_bounds(scenario, seed, options.samples_override, nd_tolerance, ops);
    } else if (kind == "full-report") {
      ReproduceOptions rep;
      rep.seed = options.seed_override.value_or(get_u64(scenario, "seed", 42));
      rep.samples = options.samples_override.value_or(get_u64(scenario, "samples", 1000000));
      ReproduceResult result = reproduce_reply(rep);
      result.report["inputs"] = scenario;
      write_atomic(options.out_path, render(result.report, options.format));
      if (!result.all_match) {
        std::cerr << "full-report: one or more rows MISMATCH\n";
        return kExitFailure;
      }
      return kExitOk;
    } else {
      fail(errc::validation, "scenario: unknown kind '" + kind + "'");
    }

    json samples_echo;
    if (options.samples_override) {
      samples_echo = *options.samples_override;
    } else if (scenario.contains("samples")) {
      samples_echo = scenario["samples"];
    }

    json report = {{"kind", kind},
                   {"inputs", scenario},
                   {"provenance",
                    {{"version", kVersion},
                     {"seed", seed},
                     {"samples", std::move(samples_echo)},
                     {"timestamp", timestamp_utc()}}},
                   {"operations", ops.to_json()},
                   {"results", std::move(results)}};
    write_atomic(options.out_path, render(report, options.format));
    return kExitOk;
  } catch (const Error& e) {
    std::cerr << "error (" << errc_name(e.code()) << "): " << e.what() << "\n";
    return map_error_to_exit(e);
  } catch (const json::exception& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace ctxlab::cli
