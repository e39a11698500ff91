#pragma once

// Batch experiments: declarative run specs, seeded chains dispatched to a
// worker pool, per-seed CSV streams, a reducer for summaries, floor sweeps and
// the validation suites.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dobrushin/alpha.hpp"
#include "dobrushin/observables.hpp"
#include "dobrushin/sampler.hpp"

namespace dobrushin {

struct ExperimentSpec {
  std::string name = "run";
  int n = 8;
  int h = 8;  // box height (even)
  double beta = 1.0;
  std::vector<FloorConstraint> floors{FloorConstraint::none()};
  std::uint64_t steps = 100000;
  std::uint64_t burn_in = 10000;
  std::uint64_t thin = 1000;
  std::vector<std::uint64_t> seeds{1};
  Acceptance acceptance = Acceptance::Metropolis;
  int init_lift = 0;             // start from the flat interface lifted by this much
  int h_star = 0;                // used by repelled_sites / half_space_count
  int k = 0;
  ColumnTrace trace = ColumnTrace::Closed;
  std::uint64_t audit_interval = 0;

  void validate() const;
};

ExperimentSpec parse_experiment_spec(const std::string& json_text);
std::string experiment_spec_json(const ExperimentSpec& spec);
/// FNV-1a of the canonical spec JSON, as 16 hex digits.
std::string spec_hash(const ExperimentSpec& spec);

/// Observable columns of the per-seed CSV streams, after "step".
const std::vector<std::string>& observable_columns();

/// One CSV row of observables for a configuration.
std::vector<double> observe(const SpinConfig& config, std::int64_t energy, const ExperimentSpec& spec);

struct SummaryRow {
  std::string floor;
  std::string column;
  double mean = 0;
  double se = 0;  // across seeds (seed means are independent)
  std::uint64_t seeds = 0;
  std::uint64_t samples = 0;
};

/// Worker count from DOBRUSHIN_WORKERS, else hardware concurrency.
unsigned worker_count_from_env();
/// Runs every task on a pool; output order is the task order.
void run_parallel(const std::vector<std::function<void()>>& tasks, unsigned workers);

/// Writes <out>/manifest.json, <out>/<floor>/seed-<s>.csv, <out>/<floor>/final-<s>.json
/// and the summaries. Throws Error(Infeasible) for an infeasible start, Error(Io).
void cmd_simulate(const ExperimentSpec& spec, const std::string& out_dir);

/// Recomputes <out>/summary.csv from the raw per-seed streams and returns the rows.
std::vector<SummaryRow> reduce_run(const std::string& out_dir);

std::string floor_label(const FloorConstraint& c);

struct SweepOptions {
  ExperimentSpec base;   // floors are replaced by the sweep
  std::vector<int> floors;
  bool plus_floor = false;  // PlusBelow instead of InterfaceConditioned
};

/// Runs the unconditioned baseline and every floor, writes <out>/sweep.csv with
/// one row per floor and returns its text. Propagates ThresholdNotCrossed.
std::string repulsion_sweep(const AlphaTable& table, const SweepOptions& options, const std::string& out_dir);

struct SuiteResult {
  std::string name;
  bool passed = true;
  std::uint64_t checked = 0;
  std::uint64_t failures = 0;
  std::string detail;
};

struct ValidateOptions {
  bool full = false;
  /// Deliberately corrupt reconstructed interfaces (drop one face) so the
  /// bijection suite can be seen to fail.
  bool mutate_reconstruct = false;
  std::uint64_t seed = 1;
};

std::vector<SuiteResult> run_validation(const ValidateOptions& options);
std::string validation_json(const std::vector<SuiteResult>& results, const ValidateOptions& options);

}  // namespace dobrushin
