#ifndef CTXLAB_REPORT_HPP
#define CTXLAB_REPORT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace ctxlab::cli {

// Exit codes of the scenario runner.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // internal errors, I/O, MISMATCH rows
inline constexpr int kExitParse = 2;
inline constexpr int kExitValidation = 3;
inline constexpr int kExitResource = 4;

struct RunOptions {
  std::string scenario_path;
  std::string out_path;  // empty = stdout
  std::string format = "json";
  std::optional<std::uint64_t> seed_override;
  std::optional<std::uint64_t> samples_override;
  std::optional<double> tolerance_override;  // no-disturbance tolerance
};

// Executes one scenario file (kind quantum / hidden-variable / bounds /
// full-report) and writes the report. Returns an exit code instead of
// throwing; diagnostics go to stderr.
int run(const RunOptions& options);

struct ReproduceOptions {
  std::string out_path;  // empty = stdout
  std::string format = "json";
  std::uint64_t seed = 42;
  std::uint64_t samples = 1000000;
  std::string inject_fault;  // quantity name to corrupt (test hook)
};

struct ReproduceResult {
  nlohmann::json report;
  bool all_match = false;
};

// Recomputes the full claim table (bunching distribution, no-signalling
// marginals, lambda-model behavior and witness, KCBS/Specker bounds,
// exclusivity sums) and marks every row MATCH or MISMATCH against its
// expected value.
ReproduceResult reproduce_reply(const ReproduceOptions& options);

// Same as reproduce_reply but also writes the report; returns an exit code
// (kExitFailure when any row mismatches).
int run_reproduce(const ReproduceOptions& options);

// Engine operations a scenario can exercise; the bundled corpus is required
// to cover all of them.
const std::vector<std::string>& all_engine_operations();

std::string report_to_csv(const nlohmann::json& report);

}  // namespace ctxlab::cli

#endif
