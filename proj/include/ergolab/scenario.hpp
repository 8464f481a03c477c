#ifndef ERGOLAB_SCENARIO_HPP
#define ERGOLAB_SCENARIO_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ergolab/convergence.hpp"
#include "ergolab/maximal.hpp"
#include "ergolab/symmetric.hpp"

// Config-driven experiment runner. A scenario file is a sectioned key-value
// text format (see docs/scenario_format.md); each subcommand turns one
// scenario into CSV tables, polyline plots, and a run record with one verdict
// per check. Exit codes: 0 all verdicts pass, 1 a property verdict failed,
// 2 configuration error.

namespace ergolab {

struct ScenarioOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> step;
  std::optional<std::string> out_dir;
};

struct Scenario {
  std::string path;
  std::string hash; // FNV-1a of the file bytes
  std::uint64_t seed = 1;

  SpacePtr space;
  std::optional<Semigroup> semigroup;
  Weight weight;
  std::optional<Field> function;
  TailClass tail = TailClass::finite_support;
  double tail_level = 0.0;

  double p = 1.0;
  double epsilon = 0.1;
  double threshold = 1e-3;
  std::vector<double> t_grid;
  LimitDirection direction = LimitDirection::to_infinity;
  std::vector<double> lambda_grid; // empty -> default grid
  std::vector<SymmetricNormSpec> norms;
  std::string out_dir = "out";
};

// Throws std::invalid_argument / std::runtime_error on malformed input;
// the CLI maps those to exit code 2.
Scenario load_scenario(const std::string& path, const ScenarioOverrides& overrides = {});

struct CheckVerdict {
  std::string name;
  bool pass = false;
  bool estimate_grade = false; // counts as failure only under --strict
  std::string detail;
};

struct RunRecord {
  std::string scenario_path;
  std::string scenario_hash;
  std::uint64_t seed = 0;
  std::string subcommand;
  std::vector<CheckVerdict> verdicts;
  std::vector<std::string> artifacts;
  double wall_ms = 0.0;

  bool hard_pass() const;
  bool strict_pass() const;
};

inline constexpr const char* kSubcommands[] = {"check-ds", "converge", "maximal",
                                               "weights", "rearrange", "all"};

// Runs one subcommand pipeline ("all" chains every pipeline) and writes the
// run record plus artifacts under the scenario's output directory.
RunRecord run_scenario(const std::string& subcommand, const Scenario& scenario);

// Executes every .scn file under `suite_dir` (sorted by name) on up to
// `threads` workers, writing a summary.csv into `out_root`.
std::vector<RunRecord> run_suite(const std::string& subcommand, const std::string& suite_dir,
                                 const ScenarioOverrides& overrides, int threads,
                                 const std::string& out_root);

int exit_code_for(const std::vector<RunRecord>& records, bool strict);

// Deterministic uniform values in [-1, 1); used by the named random function
// generators so reruns are byte-identical.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}
  double uniform();
  double uniform(double lo, double hi);
  std::uint64_t next();

private:
  std::uint64_t state_;
};

// (row, col, re, im) CSV with one header line.
KernelMatrix load_kernel_csv(const std::string& path, std::size_t dim);

// (s, re, im) CSV; evaluation is defined at the tabulated s only (1e-9
// alignment), anything else throws.
Weight load_weight_csv(const std::string& path);

} // namespace ergolab

#endif
