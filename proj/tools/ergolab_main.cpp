#include <cstdio>
#include <map>
#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ergolab/scenario.hpp"

// ergolab <subcommand> <scenario-or-suite-dir> [options]
//
// Subcommands: check-ds, converge, maximal, weights, rearrange, all.
// A directory argument runs every .scn inside it on the worker pool.
// Exit codes: 0 all checks pass, 1 a property check failed, 2 bad
// configuration or usage.

namespace {

void print_record(const ergolab::RunRecord& rec) {
  std::printf("== %s [%s] seed=%llu (%.1f ms)\n", rec.scenario_path.c_str(),
              rec.subcommand.c_str(), static_cast<unsigned long long>(rec.seed), rec.wall_ms);
  for (const ergolab::CheckVerdict& v : rec.verdicts) {
    std::printf("  [%s] %-34s %s\n", v.pass ? "PASS" : (v.estimate_grade ? "warn" : "FAIL"),
                v.name.c_str(), v.detail.c_str());
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for weighted ergodic averages of Dunford-Schwartz semigroups"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  double step = 0.0;
  bool step_set = false;
  int threads = 1;
  bool strict = false;

  const std::map<std::string, std::string> blurbs = {
      {"check-ds", "contraction, semigroup law, and strong continuity certification"},
      {"converge", "flow or local convergence reports with Egorov sets"},
      {"maximal", "maximal functions and weak-type threshold tables"},
      {"weights", "Cesaro deviation profiles of the weight approximants"},
      {"rearrange", "rearrangement profiles, majorization, and symmetric norms"},
      {"all", "every pipeline in sequence"}};

  std::vector<CLI::App*> subs;
  for (const char* name : ergolab::kSubcommands) {
    CLI::App* sub = app.add_subcommand(name, blurbs.at(name));
    sub->add_option("scenario", scenario_path, "scenario file or suite directory")->required();
    sub->add_option("--out", out_dir, "output directory override");
    sub->add_option("--seed", seed, "seed override")->each([&](const std::string&) { seed_set = true; });
    sub->add_option("--step", step, "grid step override")->each([&](const std::string&) { step_set = true; });
    sub->add_option("--threads", threads, "worker count for suite runs");
    sub->add_flag("--strict", strict, "treat estimate-grade checks as failures");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string subcommand = app.get_subcommands().front()->get_name();

  ergolab::ScenarioOverrides overrides;
  if (seed_set) overrides.seed = seed;
  if (step_set) overrides.step = step;
  if (!out_dir.empty()) overrides.out_dir = out_dir;

  try {
    std::vector<ergolab::RunRecord> records;
    if (std::filesystem::is_directory(scenario_path)) {
      const std::string root = out_dir.empty() ? "out" : out_dir;
      ergolab::ScenarioOverrides suite_overrides = overrides;
      suite_overrides.out_dir.reset(); // per-scenario directories under the root
      records = ergolab::run_suite(subcommand, scenario_path, suite_overrides, threads, root);
    } else {
      ergolab::Scenario sc = ergolab::load_scenario(scenario_path, overrides);
      records.push_back(ergolab::run_scenario(subcommand, sc));
    }
    for (const ergolab::RunRecord& rec : records) print_record(rec);
    const int code = ergolab::exit_code_for(records, strict);
    std::printf("exit %d\n", code);
    return code;
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "configuration error: %s\n", ex.what());
    return 2;
  }
}
