#pragma once

#include <string>

#include "job.hpp"

namespace lab {

// {"base": <job>, "grid": {"<field>": [v1, v2, ...], ...}} -> the Cartesian product of jobs,
// in row-major order over the grid keys as listed.
std::vector<JobSpec> expand_sweep(const nlohmann::json& spec);

struct SweepResult {
  std::string csv;  // one row per job
  int failed = 0;
};
// Runs the jobs on worker_count() threads; failures are recorded per row.
SweepResult run_sweep(const nlohmann::json& spec, const std::string& out_dir);

// Human-readable summary of the reports under `dir`; throws UsageError listing what is missing.
std::string render_report(const std::string& dir);
// a_{k,n} for n = 2..max_n.
std::string constants_table(int max_n);

}  // namespace lab
