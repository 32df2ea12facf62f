#include "ctxlab/hv.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ctxlab/errors.hpp"
#include "ctxlab/rng.hpp"

namespace ctxlab::hv {

bool operator==(const MeasurementContext& a, const MeasurementContext& b) {
  return a.first == b.first && a.second == b.second;
}

bool same_pair(const MeasurementContext& a, const MeasurementContext& b) {
  return (a.first == b.first && a.second == b.second) || (a.first == b.second && a.second == b.first);
}

void Scenario::validate() const {
  if (observables < 1) fail(errc::validation, "scenario: needs at least one observable");
  if (contexts.empty()) fail(errc::validation, "scenario: contexts list is empty");
  for (std::size_t k = 0; k < contexts.size(); ++k) {
    const MeasurementContext& c = contexts[k];
    if (c.first < 1 || c.first > observables || c.second < 1 || c.second > observables)
      fail(errc::validation, "scenario: context observable index out of range");
    if (c.first == c.second) fail(errc::validation, "scenario: context must pair two distinct observables");
    for (std::size_t j = 0; j < k; ++j)
      if (same_pair(contexts[j], c)) fail(errc::validation, "scenario: duplicate context pair");
  }
}

double ContextTable::entry(int value_first, int value_second) const {
  if (value_first > 0) return value_second > 0 ? pp : pm;
  return value_second > 0 ? mp : mm;
}

void Behavior::validate() const {
  if (contexts.size() != tables.size()) fail(errc::internal, "behavior: contexts/tables length mismatch");
  if (contexts.empty()) fail(errc::validation, "behavior: empty");
  for (std::size_t k = 0; k < tables.size(); ++k) {
    const ContextTable& t = tables[k];
    for (double p : {t.pp, t.pm, t.mp, t.mm})
      if (p < -kTableTol || p > 1.0 + kTableTol)
        fail(errc::validation, "behavior: table entry outside [0,1]");
    if (std::abs(t.sum() - 1.0) > kTableTol)
      fail(errc::validation, "behavior: context table sums to " + std::to_string(t.sum()));
  }
}

ContextTable Behavior::table_for(const MeasurementContext& ctx) const {
  for (std::size_t k = 0; k < contexts.size(); ++k) {
    if (contexts[k] == ctx) return tables[k];
    if (same_pair(contexts[k], ctx)) return tables[k].transposed();
  }
  fail(errc::missing_context, "behavior: no table for context (" + std::to_string(ctx.first) + "," +
                                  std::to_string(ctx.second) + ")");
}

double Behavior::marginal_plus(int observable, std::size_t index) const {
  const MeasurementContext& ctx = contexts[index];
  const ContextTable& t = tables[index];
  if (observable == ctx.first) return t.pp + t.pm;
  if (observable == ctx.second) return t.pp + t.mp;
  fail(errc::validation, "behavior: observable not in context");
}

HiddenLambdaState::HiddenLambdaState(std::vector<double> lambdas) : lambdas_(std::move(lambdas)) {
  if (lambdas_.empty()) fail(errc::validation, "lambda state: empty");
  for (double l : lambdas_)
    if (!(l > 0.0 && l < 1.0)) fail(errc::validation, "lambda state: values must lie strictly in (0,1)");
  for (std::size_t i = 0; i < lambdas_.size(); ++i)
    for (std::size_t j = i + 1; j < lambdas_.size(); ++j)
      if (lambdas_[i] == lambdas_[j]) fail(errc::tie, "lambda state: exact tie between lambdas");
}

double HiddenLambdaState::lambda(int observable) const {
  if (observable < 1 || observable > size()) fail(errc::validation, "lambda state: observable index out of range");
  return lambdas_[static_cast<std::size_t>(observable - 1)];
}

DeterministicAssignment::DeterministicAssignment(std::vector<int> values) : values_(std::move(values)) {
  if (values_.empty()) fail(errc::validation, "assignment: empty");
  for (int v : values_)
    if (v != 1 && v != -1) fail(errc::validation, "assignment: values must be +1 or -1");
}

int DeterministicAssignment::value(int observable) const {
  if (observable < 1 || observable > size())
    fail(errc::coverage, "assignment: no value for observable " + std::to_string(observable));
  return values_[static_cast<std::size_t>(observable - 1)];
}

std::pair<int, int> lambda_model_outcome(const HiddenLambdaState& state, const MeasurementContext& ctx) {
  if (ctx.first == ctx.second) fail(errc::validation, "lambda model: context must pair distinct observables");
  const double li = state.lambda(ctx.first);
  const double lj = state.lambda(ctx.second);
  if (li == lj) fail(errc::tie, "lambda model: exact lambda tie");
  return li > lj ? std::pair<int, int>{+1, -1} : std::pair<int, int>{-1, +1};
}

void LambdaLaw::validate() const {
  if (family == Family::power && !(exponent > 0.0)) fail(errc::validation, "lambda law: power exponent must be > 0");
}

namespace {

double law_transform(const LambdaLaw& law, double u) {
  switch (law.family) {
    case LambdaLaw::Family::uniform: return u;
    case LambdaLaw::Family::power: return std::pow(u, law.exponent);
  }
  fail(errc::internal, "lambda law: unknown family");
}

}  // namespace

Behavior lambda_exact_behavior(const Scenario& scenario, const LambdaLaw& law) {
  scenario.validate();
  law.validate();
  if (!law.iid)
    fail(errc::unsupported_law, "lambda_exact_behavior: only i.i.d. continuous laws are supported");

  // P(lambda_i > lambda_j) = 1/2 for any i.i.d. continuous law; outcomes are
  // anticorrelated by construction.
  Behavior b;
  b.contexts = scenario.contexts;
  b.tables.assign(scenario.contexts.size(), ContextTable{0.0, 0.5, 0.5, 0.0});
  return b;
}

Behavior lambda_sample_behavior(const Scenario& scenario, std::uint64_t n_samples, std::uint64_t seed,
                                const LambdaLaw& law) {
  scenario.validate();
  law.validate();
  if (!law.iid)
    fail(errc::unsupported_law, "lambda_sample_behavior: only i.i.d. continuous laws are supported");
  if (n_samples < 1) fail(errc::validation, "lambda_sample_behavior: need at least one sample");

  Behavior b;
  b.contexts = scenario.contexts;
  b.tables.resize(scenario.contexts.size());
  for (std::size_t k = 0; k < scenario.contexts.size(); ++k) {
    CounterRng rng(seed, static_cast<std::uint64_t>(k));
    std::uint64_t first_larger = 0;
    for (std::uint64_t s = 0; s < n_samples; ++s) {
      const double li = law_transform(law, rng.next_unit_open());
      const double lj = law_transform(law, rng.next_unit_open());
      if (li == lj) fail(errc::tie, "lambda_sample_behavior: exact lambda tie in sample");
      if (li > lj) ++first_larger;
    }
    const double n = static_cast<double>(n_samples);
    b.tables[k] = ContextTable{0.0, static_cast<double>(first_larger) / n,
                               static_cast<double>(n_samples - first_larger) / n, 0.0};
  }
  return b;
}

Behavior deterministic_behavior(const DeterministicAssignment& assignment, const Scenario& scenario) {
  scenario.validate();
  if (assignment.size() < scenario.observables)
    fail(errc::coverage, "deterministic_behavior: assignment does not cover all observables");

  Behavior b;
  b.contexts = scenario.contexts;
  b.tables.reserve(scenario.contexts.size());
  for (const MeasurementContext& ctx : scenario.contexts) {
    ContextTable t;
    const int vi = assignment.value(ctx.first);
    const int vj = assignment.value(ctx.second);
    (vi > 0 ? (vj > 0 ? t.pp : t.pm) : (vj > 0 ? t.mp : t.mm)) = 1.0;
    b.tables.push_back(t);
  }
  return b;
}

std::optional<ContextWitness> context_dependence_witness(const HiddenLambdaState& state, int observable,
                                                         const MeasurementContext& ctx_a,
                                                         const MeasurementContext& ctx_b) {
  if (!ctx_a.contains(observable) || !ctx_b.contains(observable))
    fail(errc::validation, "witness: observable must belong to both contexts");

  const auto pick = [observable](const MeasurementContext& ctx, const std::pair<int, int>& outcome) {
    return observable == ctx.first ? outcome.first : outcome.second;
  };
  const int va = pick(ctx_a, lambda_model_outcome(state, ctx_a));
  const int vb = pick(ctx_b, lambda_model_outcome(state, ctx_b));
  if (va == vb) return std::nullopt;
  return ContextWitness{observable, ctx_a, ctx_b, va, vb};
}

Scenario scenario_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("observables") || !j.contains("contexts"))
    fail(errc::validation, "scenario json: expected object with observables/contexts");
  if (!j["observables"].is_number_integer()) fail(errc::validation, "scenario json: observables must be an integer");
  Scenario s;
  s.observables = j["observables"].get<int>();
  if (!j["contexts"].is_array()) fail(errc::validation, "scenario json: contexts must be an array");
  for (const auto& c : j["contexts"]) {
    if (!c.is_array() || c.size() != 2 || !c[0].is_number_integer() || !c[1].is_number_integer())
      fail(errc::validation, "scenario json: each context must be a pair of integers");
    s.contexts.push_back({c[0].get<int>(), c[1].get<int>()});
  }
  s.validate();
  return s;
}

nlohmann::json scenario_to_json(const Scenario& s) {
  nlohmann::json contexts = nlohmann::json::array();
  for (const MeasurementContext& c : s.contexts) contexts.push_back({c.first, c.second});
  return {{"observables", s.observables}, {"contexts", std::move(contexts)}};
}

Behavior behavior_from_json(const nlohmann::json& j) {
  if (!j.is_array()) fail(errc::validation, "behavior json: expected array");
  Behavior b;
  for (const auto& entry : j) {
    if (!entry.is_object() || !entry.contains("context") || !entry.contains("table"))
      fail(errc::validation, "behavior json: entries need context and table");
    const auto& c = entry["context"];
    if (!c.is_array() || c.size() != 2) fail(errc::validation, "behavior json: context must be a pair");
    b.contexts.push_back({c[0].get<int>(), c[1].get<int>()});
    const auto& t = entry["table"];
    for (const char* key : {"pp", "pm", "mp", "mm"})
      if (!t.contains(key) || !t[key].is_number())
        fail(errc::validation, std::string("behavior json: table missing key ") + key);
    b.tables.push_back({t["pp"].get<double>(), t["pm"].get<double>(), t["mp"].get<double>(), t["mm"].get<double>()});
  }
  b.validate();
  return b;
}

nlohmann::json behavior_to_json(const Behavior& b) {
  nlohmann::json out = nlohmann::json::array();
  for (std::size_t k = 0; k < b.contexts.size(); ++k) {
    const ContextTable& t = b.tables[k];
    out.push_back({{"context", {b.contexts[k].first, b.contexts[k].second}},
                   {"table", {{"pp", t.pp}, {"pm", t.pm}, {"mp", t.mp}, {"mm", t.mm}}}});
  }
  return out;
}

LambdaLaw lambda_law_from_json(const nlohmann::json& j) {
  LambdaLaw law;
  if (j.is_null()) return law;
  if (!j.is_object()) fail(errc::validation, "lambda law json: expected object");
  if (j.contains("family")) {
    const std::string family = j["family"].get<std::string>();
    if (family == "uniform") {
      law.family = LambdaLaw::Family::uniform;
    } else if (family == "power") {
      law.family = LambdaLaw::Family::power;
    } else {
      fail(errc::unsupported_law, "lambda law json: unknown family '" + family + "'");
    }
  }
  if (j.contains("exponent")) law.exponent = j["exponent"].get<double>();
  if (j.contains("iid")) law.iid = j["iid"].get<bool>();
  law.validate();
  return law;
}

}  // namespace ctxlab::hv
