#pragma once

#include "xprod/config.hpp"

namespace xprod {

struct SweepRow {
  int k = 0;
  double max_defect = 0.0;
  double max_error = 0.0;
};

struct RunReport {
  struct Record {
    CheckResult check;
    std::string task;
    double elapsed_ms = 0.0;
  };
  std::vector<Record> records;
  std::vector<std::string> notes;
  std::vector<SweepRow> sweep;
  std::uint64_t seed = 0;
  Tolerances tolerances;

  int pass_count() const;
  int fail_count() const;
  double max_residual() const;
  bool all_pass() const { return fail_count() == 0; }

  /// Stable-ordered JSON; elapsed_ms fields are the only nondeterministic
  /// content for a fixed config + seed.
  std::string to_json_text() const;
  std::string sweep_to_csv() const;
};

/// Executes the configured tasks in declared order (concurrently when
/// `config.parallel`; record order is declaration order either way).
RunReport run(const RunConfig& config);

/// k = 1..n rows of (k, max_t defect, max basis factorization error) for
/// uniform fields on {0..k-1} of a cyclic group.
std::vector<SweepRow> defect_sweep(const RunConfig& config);

/// Full CLI entry: run, write report/CSV, print the table; returns the exit
/// code (0 all pass, 1 any check failed, 2 config error).
int run_cli(const RunConfig& config, const std::string& report_path,
            const std::string& csv_path);

}  // namespace xprod
