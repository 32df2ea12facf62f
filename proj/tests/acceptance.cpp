// Acceptance suite: drives every headline claim end to end and prints one
// PASS/FAIL line per criterion. Exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "ctxlab/fock.hpp"
#include "ctxlab/hv.hpp"
#include "ctxlab/inequalities.hpp"
#include "ctxlab/rng.hpp"
#include "ctxlab/simplex.hpp"
#include "json.hpp"
#include "oracles.hpp"
#include "test_paths.hpp"

using namespace ctxlab;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void report(const char* id, const char* name, bool pass, const std::string& detail) {
  std::printf("[%s] %s %s: %s\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
  if (!pass) ++failures;
}

std::string format(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  return buf;
}

// C1: lambda model on the 5-cycle reaches -5 exactly; Monte Carlo at 10^6
// samples lands within 0.02; both inside 5 seconds.
void criterion_kcbs_violation() {
  const auto start = Clock::now();
  const hv::Scenario kcbs = ineq::cycle_scenario(5);
  const double exact = ineq::cycle_value(hv::lambda_exact_behavior(kcbs), kcbs);
  const double sampled = ineq::cycle_value(hv::lambda_sample_behavior(kcbs, 1000000, 42), kcbs);
  const double dt = seconds_since(start);
  const bool pass = exact == -5.0 && std::abs(sampled - (-5.0)) <= 0.02 && dt < 5.0;
  report("C1", "kcbs-maximal-violation", pass,
         format("exact=%.12g sampled=%.12g dt=%.2fs", exact, sampled, dt));
}

// C2: classical -3 by 2^5 enumeration, ND -5 by LP, arithmetic -5, with the
// ordering chain intact; inside 1 second.
void criterion_kcbs_bounds() {
  const auto start = Clock::now();
  const hv::Scenario kcbs = ineq::cycle_scenario(5);
  const auto r = ineq::bounds_report(kcbs, ineq::InequalityExpr::correlator_sum(kcbs));
  const double dt = seconds_since(start);
  const bool ordered = r.arithmetic_min <= r.nd_min + 1e-7 && r.nd_min <= r.classical_min + 1e-7 &&
                       r.classical_min <= r.classical_max && r.classical_max <= r.nd_max + 1e-7 &&
                       r.nd_max <= r.arithmetic_max + 1e-7;
  const bool pass = r.classical_min == -3.0 && std::abs(r.nd_min - (-5.0)) <= 1e-7 && r.arithmetic_min == -5.0 &&
                    ordered && dt < 1.0;
  report("C2", "kcbs-bound-chain", pass,
         format("classical=%.12g nd=%.12g arithmetic=%.12g ordered=%d dt=%.2fs", r.classical_min, r.nd_min,
                r.arithmetic_min, ordered ? 1 : 0, dt));
}

// C3: Specker triangle: lambda value -3, classical minimum -1.
void criterion_specker() {
  const auto start = Clock::now();
  const hv::Scenario triangle = ineq::cycle_scenario(3);
  const double value = ineq::cycle_value(hv::lambda_exact_behavior(triangle), triangle);
  const auto classical = ineq::classical_bound(triangle, ineq::InequalityExpr::correlator_sum(triangle));
  const double dt = seconds_since(start);
  const bool pass = value == -3.0 && classical.bounds.min == -1.0 && dt < 1.0;
  report("C3", "specker-triangle", pass,
         format("value=%.12g classical_min=%.12g dt=%.2fs", value, classical.bounds.min, dt));
}

// C4: the exact behavior has every marginal equal to 1/2 and passes the
// no-disturbance check with zero gap at tolerance 1e-12.
void criterion_lambda_no_disturbance() {
  const hv::Scenario kcbs = ineq::cycle_scenario(5);
  const hv::Behavior b = hv::lambda_exact_behavior(kcbs);
  bool marginals_half = true;
  for (std::size_t k = 0; k < b.contexts.size(); ++k) {
    marginals_half = marginals_half && b.marginal_plus(b.contexts[k].first, k) == 0.5 &&
                     b.marginal_plus(b.contexts[k].second, k) == 0.5;
  }
  const auto nd = ineq::no_disturbance_check(b, 1e-12);
  const bool pass = marginals_half && nd.pass && nd.max_gap == 0.0;
  report("C4", "lambda-no-disturbance", pass,
         format("marginals_half=%d gap=%.3g pass=%d", marginals_half ? 1 : 0, nd.max_gap, nd.pass ? 1 : 0));
}

// C5: for lambda_1 < lambda_2 < lambda_3, A_2 = -1 with A_3 and +1 with A_1;
// all 6 orderings of sampled triples verified exhaustively.
void criterion_witness() {
  CounterRng rng(2025, 0);
  bool pass = true;
  int checked = 0;
  for (int trial = 0; trial < 50 && pass; ++trial) {
    double v[3] = {rng.next_unit_open(), rng.next_unit_open(), rng.next_unit_open()};
    if (v[0] == v[1] || v[1] == v[2] || v[0] == v[2]) continue;
    std::sort(v, v + 3);
    int perm[3] = {0, 1, 2};
    do {
      const std::vector<double> lambdas = {v[perm[0]], v[perm[1]], v[perm[2]]};
      const hv::HiddenLambdaState state(lambdas);
      const auto a23 = hv::lambda_model_outcome(state, {2, 3});
      const auto a12 = hv::lambda_model_outcome(state, {1, 2});
      if (perm[0] == 0 && perm[1] == 1 && perm[2] == 2) {
        // Sorted ascending: lambda_1 < lambda_2 < lambda_3.
        pass = pass && a23.first == -1 && a12.second == +1;
      }
      const bool middle = (lambdas[1] > lambdas[0]) != (lambdas[1] > lambdas[2]);
      const auto witness = hv::context_dependence_witness(state, 2, {2, 3}, {1, 2});
      pass = pass && witness.has_value() == middle;
      ++checked;
    } while (std::next_permutation(perm, perm + 3) && pass);
  }
  report("C5", "context-dependence-witness", pass, format("orderings_checked=%d", checked));
}

// C6: 50:50 splitter marginals are 1/2 with and without the second photon;
// the HOM coincidence term vanishes.
void criterion_quantum_no_signalling() {
  const fock::ModeUnitary bs = fock::ModeUnitary::beam_splitter_5050();
  const auto ns = fock::no_signalling_report(bs, fock::FockState{{1, 0}}, fock::FockState{{1, 1}}, 0);
  const double hom = fock::transition_probability(bs, fock::FockState{{1, 1}}, fock::FockState{{1, 1}});
  const bool pass = std::abs(ns.marginal_base - 0.5) <= 1e-10 && std::abs(ns.marginal_added - 0.5) <= 1e-10 &&
                    ns.difference < 1e-10 && hom < 1e-10;
  report("C6", "quantum-no-signalling", pass,
         format("single=%.12g pair=%.12g diff=%.3g hom=%.3g", ns.marginal_base, ns.marginal_added, ns.difference,
                hom));
}

// C7: Ryser permanent vs the naive n!-term sum on 200 random complex
// matrices with n <= 6, relative error < 1e-12.
void criterion_permanent_oracle() {
  CounterRng rng(77, 0);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.next_u64() % 6;
    CMatrix m(n, n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        m(r, c) = cdouble(2.0 * rng.next_unit_open() - 1.0, 2.0 * rng.next_unit_open() - 1.0);
    const cdouble fast = fock::permanent(m);
    const cdouble naive = oracle::permanent_naive(m);
    const double rel = std::abs(fast - naive) / std::max(1e-300, std::abs(naive));
    worst = std::max(worst, rel);
  }
  report("C7", "permanent-oracle", worst < 1e-12, format("trials=200 worst_rel=%.3g", worst));
}

// C8: random orthogonal projector sets never exceed 1; the lambda model's
// three pairwise exclusive triangle events sum to 3/2 and are flagged.
void criterion_exclusivity() {
  CounterRng rng(88, 0);
  double max_sum = 0.0;
  bool all_orthogonal = true;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t dim = 2 + rng.next_u64() % 5;  // 2..6
    const CMatrix u = random_unitary(dim, rng);
    const std::size_t groups = 2 + rng.next_u64() % (dim - 1);
    const std::size_t used = groups + rng.next_u64() % (dim - groups + 1);
    std::vector<CMatrix> projectors(groups, CMatrix(dim, dim));
    for (std::size_t col = 0; col < used; ++col) {
      CMatrix& p = projectors[col % groups];
      for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c) p(r, c) += u(r, col) * std::conj(u(c, col));
    }
    const auto sum = ineq::projector_exclusivity_sum(random_state(dim, rng), projectors);
    max_sum = std::max(max_sum, sum.sum);
    all_orthogonal = all_orthogonal && sum.orthogonal;
  }

  const hv::Scenario triangle = ineq::cycle_scenario(3);
  const std::vector<ineq::Event> events = {{{1, 2}, +1, -1}, {{2, 3}, +1, -1}, {{3, 1}, +1, -1}};
  const auto ex = ineq::exclusivity_sum(hv::lambda_exact_behavior(triangle), events);

  const bool pass = all_orthogonal && max_sum <= 1.0 + 1e-10 && ex.sum == 1.5 && ex.pairwise_exclusive &&
                    !ex.satisfies_principle;
  report("C8", "exclusivity-principle", pass,
         format("max_projector_sum=%.12g lambda_triangle_sum=%.12g flagged=%d", max_sum, ex.sum,
                !ex.satisfies_principle ? 1 : 0));
}

// C9: the CLI's reproduce-reply report is all-MATCH within 30 seconds.
void criterion_end_to_end() {
  namespace fs = std::filesystem;
  const auto start = Clock::now();
  const fs::path out = fs::temp_directory_path() / "ctxlab_acceptance_reproduce.json";
  const std::string cmd =
      std::string(CTXLAB_CLI_PATH) + " reproduce-reply --out " + out.string() + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  const int exit_code = WEXITSTATUS(status);
  bool all_match = false;
  std::size_t rows = 0;
  std::ifstream in(out);
  if (in.good()) {
    const auto report_json = nlohmann::json::parse(in, nullptr, false);
    if (!report_json.is_discarded() && report_json.contains("all_match")) {
      all_match = report_json["all_match"].get<bool>();
      rows = report_json["rows"].size();
      for (const auto& row : report_json["rows"])
        all_match = all_match && row["status"].get<std::string>() == "MATCH";
    }
  }
  const double dt = seconds_since(start);
  const bool pass = exit_code == 0 && all_match && rows > 0 && dt < 30.0;
  report("C9", "end-to-end-reproduce", pass,
         format("exit=%d rows=%zu all_match=%d dt=%.2fs", exit_code, rows, all_match ? 1 : 0, dt));
}

}  // namespace

int main() {
  criterion_kcbs_violation();
  criterion_kcbs_bounds();
  criterion_specker();
  criterion_lambda_no_disturbance();
  criterion_witness();
  criterion_quantum_no_signalling();
  criterion_permanent_oracle();
  criterion_exclusivity();
  criterion_end_to_end();

  std::printf("%d/9 criteria passed\n", 9 - failures);
  return failures == 0 ? 0 : 1;
}
