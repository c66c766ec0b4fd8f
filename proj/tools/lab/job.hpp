#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace lab {

// Thrown for malformed specs and flags (exit code 1).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One fully resolved job. Every report embeds to_json() of the job that produced it.
struct JobSpec {
  std::string command;
  std::string target;                 // verify: "linalg"

  // Companion data; for `collier` q is the list (q_2, q_4, ..., q_{2n-2}).
  int n = 2;
  nlohmann::json q = nlohmann::json::object();
  nlohmann::json links = nlohmann::json::array();  // solve-chain
  nlohmann::json alpha = 1.0;                      // solve-curvature
  std::string f;                                   // classify-ab
  nlohmann::json theta;                            // gauge-normalize

  // Real forms.
  nlohmann::json mu = 1.0, nu = 0.0, q2 = 0.0;
  double hM = 1.0, hL = 1.0;
  bool check_rss = false, solve_graded = false, solve_full = false;
  std::optional<double> envelope;

  // Solver configuration.
  double radius = 0.8;
  int nr = 32, nt = 64;
  double grading = 0.5;
  double tol = 1e-8;
  int max_iter = 50;
  std::vector<double> schedule;
  double observe_radius = 0.25;
  double exhaust_tol = 1e-3;
  bool compat = false;
  std::string path = "matrix";
  double eps = 0.1;                   // uniqueness: size of the boundary perturbation
  bool deterministic = true;

  // Verification suites.
  std::string suite;
  int samples = 1000;
  std::uint64_t seed = 1;

  std::string out;                    // artifact directory; empty writes nothing

  nlohmann::json to_json() const;
  static JobSpec from_json(const nlohmann::json& j);  // rejects unknown fields
  void validate() const;
};

const std::vector<std::string>& command_names();

// "32x64" (or with the multiplication sign) -> (32, 64).
std::pair<int, int> parse_grid(const std::string& text);
// Inline JSON, or the contents of the named file when the text is not JSON.
nlohmann::json json_arg(const std::string& text);

}  // namespace lab
