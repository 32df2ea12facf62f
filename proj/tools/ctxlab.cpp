// ctxlab - scenario runner for the contextuality testbed.
//
//   ctxlab run --scenario FILE [--out FILE] [--format json|csv]
//              [--seed N] [--samples N] [--tolerance X]
//   ctxlab reproduce-reply [--out FILE] [--format json|csv]
//              [--seed N] [--samples N]
//
// Exit codes: 0 ok, 1 failure/mismatch, 2 parse error, 3 validation error,
// 4 resource cap exceeded.

#include <cstdint>
#include <string>

#include "CLI11.hpp"
#include "ctxlab/report.hpp"
#include "ctxlab/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"contextuality testbed scenario runner"};
  app.set_version_flag("--version", std::string("ctxlab ") + ctxlab::kVersion);
  app.require_subcommand(1);

  ctxlab::cli::RunOptions run_options;
  CLI::App* run = app.add_subcommand("run", "execute a scenario file and write its report");
  run->add_option("--scenario", run_options.scenario_path, "scenario JSON file")->required();
  run->add_option("--out", run_options.out_path, "output path (default: stdout)");
  run->add_option("--format", run_options.format, "report format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  std::uint64_t seed = 0;
  std::uint64_t samples = 0;
  double tolerance = 0.0;
  CLI::Option* seed_opt = run->add_option("--seed", seed, "override the scenario's RNG seed");
  CLI::Option* samples_opt = run->add_option("--samples", samples, "override the scenario's sample count");
  CLI::Option* tol_opt = run->add_option("--tolerance", tolerance, "no-disturbance check tolerance");

  ctxlab::cli::ReproduceOptions rep_options;
  CLI::App* rep = app.add_subcommand("reproduce-reply", "recompute the full claim table with MATCH/MISMATCH rows");
  rep->add_option("--out", rep_options.out_path, "output path (default: stdout)");
  rep->add_option("--format", rep_options.format, "report format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  rep->add_option("--seed", rep_options.seed, "RNG seed for the Monte Carlo rows");
  rep->add_option("--samples", rep_options.samples, "Monte Carlo sample count");
  rep->add_option("--inject-fault", rep_options.inject_fault, "corrupt the named row (test hook)")->group("");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    if (*seed_opt) run_options.seed_override = seed;
    if (*samples_opt) run_options.samples_override = samples;
    if (*tol_opt) run_options.tolerance_override = tolerance;
    return ctxlab::cli::run(run_options);
  }
  return ctxlab::cli::run_reproduce(rep_options);
}
