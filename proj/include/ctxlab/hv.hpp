#ifndef CTXLAB_HV_HPP
#define CTXLAB_HV_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "json.hpp"

namespace ctxlab::hv {

inline constexpr double kTableTol = 1e-10;

// A jointly measured pair of observables. Indices are 1-based everywhere,
// matching the wire format.
struct MeasurementContext {
  int first = 0;
  int second = 0;

  bool contains(int observable) const { return observable == first || observable == second; }
};

bool operator==(const MeasurementContext& a, const MeasurementContext& b);
// Same unordered pair of observables.
bool same_pair(const MeasurementContext& a, const MeasurementContext& b);

// Compatibility structure: n observables plus the pairwise contexts that can
// be measured together.
struct Scenario {
  int observables = 0;
  std::vector<MeasurementContext> contexts;

  void validate() const;
};

// Joint outcome probabilities of one context over {+1,-1} x {+1,-1}.
struct ContextTable {
  double pp = 0.0;  // (first, second) = (+1, +1)
  double pm = 0.0;  // (+1, -1)
  double mp = 0.0;  // (-1, +1)
  double mm = 0.0;  // (-1, -1)

  double sum() const { return pp + pm + mp + mm; }
  ContextTable transposed() const { return {pp, mp, pm, mm}; }
  double entry(int value_first, int value_second) const;
};

struct Behavior {
  std::vector<MeasurementContext> contexts;
  std::vector<ContextTable> tables;  // parallel to contexts

  void validate() const;
  // Table for the unordered context, reoriented so `ctx.first` comes first.
  ContextTable table_for(const MeasurementContext& ctx) const;
  // P(observable = +1) within the context at `index`.
  double marginal_plus(int observable, std::size_t index) const;
};

// One hidden variable per observable/boson, each strictly inside (0,1).
// Exact ties are rejected outright; the ordering is the whole model.
class HiddenLambdaState {
 public:
  explicit HiddenLambdaState(std::vector<double> lambdas);

  int size() const { return static_cast<int>(lambdas_.size()); }
  double lambda(int observable) const;  // 1-based
  const std::vector<double>& values() const { return lambdas_; }

 private:
  std::vector<double> lambdas_;
};

// Context-independent +-1 values, one per observable: the noncontextual
// comparison class.
class DeterministicAssignment {
 public:
  explicit DeterministicAssignment(std::vector<int> values);

  int size() const { return static_cast<int>(values_.size()); }
  int value(int observable) const;  // 1-based
  const std::vector<int>& values() const { return values_; }

 private:
  std::vector<int> values_;
};

// The boson with the larger lambda is reflected (+1), the other transmitted
// (-1). Defined only for pairwise contexts.
std::pair<int, int> lambda_model_outcome(const HiddenLambdaState& state, const MeasurementContext& ctx);

struct LambdaLaw {
  enum class Family { uniform, power };
  Family family = Family::uniform;
  double exponent = 1.0;  // power family: lambda = u^exponent, exponent > 0
  bool iid = true;

  void validate() const;
};

// Exact single-shot behavior of the model under any i.i.d. continuous law:
// each pair is perfectly anticorrelated with both orderings equally likely.
Behavior lambda_exact_behavior(const Scenario& scenario, const LambdaLaw& law = {});

// Seeded Monte Carlo estimate of the same behavior; one counter-based stream
// per context, so results are independent of evaluation order.
Behavior lambda_sample_behavior(const Scenario& scenario, std::uint64_t n_samples, std::uint64_t seed,
                                const LambdaLaw& law = {});

Behavior deterministic_behavior(const DeterministicAssignment& assignment, const Scenario& scenario);

struct ContextWitness {
  int observable = 0;
  MeasurementContext ctx_a, ctx_b;
  int value_a = 0;
  int value_b = 0;
};

// The two outcomes of `observable` in the two contexts, if they differ.
std::optional<ContextWitness> context_dependence_witness(const HiddenLambdaState& state, int observable,
                                                         const MeasurementContext& ctx_a,
                                                         const MeasurementContext& ctx_b);

// Wire formats: scenario {"observables": n, "contexts": [[i,j], ...]};
// behavior [{"context": [i,j], "table": {"pp","pm","mp","mm"}}, ...].
Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const Scenario& s);
Behavior behavior_from_json(const nlohmann::json& j);
nlohmann::json behavior_to_json(const Behavior& b);
LambdaLaw lambda_law_from_json(const nlohmann::json& j);

}  // namespace ctxlab::hv

#endif
