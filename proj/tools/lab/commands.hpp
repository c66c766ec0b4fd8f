#pragma once

#include <map>
#include <string>

#include "job.hpp"

namespace lab {

enum ExitCode { kOk = 0, kUsage = 1, kNotConverged = 2, kHypothesis = 3 };

struct Outcome {
  int exit_code = kOk;
  nlohmann::json report;                        // always carries "job" and "status"
  std::map<std::string, std::string> artifacts;  // file name -> contents, besides report.json
};

// Dispatches the job; never throws. Usage and hypothesis errors become exit codes.
Outcome run(const JobSpec& job);
// Writes report.json and the artifacts into `dir` (created if needed).
void write_artifacts(const Outcome& o, const std::string& dir);

// HITCHIN_LAB_THREADS, clamped to [1, hardware threads].
int worker_count();

}  // namespace lab
