#include "job.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

namespace lab {

using nlohmann::json;

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {
      "solve-hitchin", "solve-chain", "solve-curvature", "exhaust", "uniqueness", "classify-ab",
      "gauge-normalize", "collier", "gothen", "verify"};
  return names;
}

json JobSpec::to_json() const {
  json j{{"command", command},
         {"target", target},
         {"n", n},
         {"q", q},
         {"links", links},
         {"alpha", alpha},
         {"f", f},
         {"theta", theta},
         {"mu", mu},
         {"nu", nu},
         {"q2", q2},
         {"hM", hM},
         {"hL", hL},
         {"check_rss", check_rss},
         {"solve_graded", solve_graded},
         {"solve_full", solve_full},
         {"envelope", envelope ? json(*envelope) : json(nullptr)},
         {"radius", radius},
         {"grid", {nr, nt}},
         {"grading", grading},
         {"tol", tol},
         {"max_iter", max_iter},
         {"schedule", schedule},
         {"observe_radius", observe_radius},
         {"exhaust_tol", exhaust_tol},
         {"compat", compat},
         {"path", path},
         {"eps", eps},
         {"deterministic", deterministic},
         {"suite", suite},
         {"samples", samples},
         {"seed", seed},
         {"out", out}};
  return j;
}

namespace {

template <class T>
void read(const json& j, const char* key, T& dst) {
  if (!j.contains(key)) return;
  try {
    dst = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw UsageError(std::string("field '") + key + "' has the wrong type");
  }
}

}  // namespace

JobSpec JobSpec::from_json(const json& j) {
  if (!j.is_object()) throw UsageError("job spec must be a JSON object");
  static const std::set<std::string> known = {
      "command", "target", "n", "q", "links", "alpha", "f", "theta", "mu", "nu", "q2", "hM", "hL",
      "check_rss", "solve_graded", "solve_full", "envelope", "radius", "grid", "grading", "tol",
      "max_iter", "schedule", "observe_radius", "exhaust_tol", "compat", "path", "eps", "deterministic",
      "suite", "samples", "seed", "out"};
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) throw UsageError("unknown field in job spec: " + k);
  JobSpec s;
  read(j, "command", s.command);
  read(j, "target", s.target);
  read(j, "n", s.n);
  if (j.contains("q")) s.q = j["q"];
  if (j.contains("links")) s.links = j["links"];
  if (j.contains("alpha")) s.alpha = j["alpha"];
  read(j, "f", s.f);
  if (j.contains("theta")) s.theta = j["theta"];
  if (j.contains("mu")) s.mu = j["mu"];
  if (j.contains("nu")) s.nu = j["nu"];
  if (j.contains("q2")) s.q2 = j["q2"];
  read(j, "hM", s.hM);
  read(j, "hL", s.hL);
  read(j, "check_rss", s.check_rss);
  read(j, "solve_graded", s.solve_graded);
  read(j, "solve_full", s.solve_full);
  if (j.contains("envelope") && !j["envelope"].is_null()) {
    double e = 0.0;
    read(j, "envelope", e);
    s.envelope = e;
  }
  read(j, "radius", s.radius);
  if (j.contains("grid")) {
    const auto& g = j["grid"];
    if (g.is_string()) {
      std::tie(s.nr, s.nt) = parse_grid(g.get<std::string>());
    } else if (g.is_array() && g.size() == 2 && g[0].is_number_integer() && g[1].is_number_integer()) {
      s.nr = g[0].get<int>();
      s.nt = g[1].get<int>();
    } else {
      throw UsageError("field 'grid' must be [nr, nt] or \"NRxNT\"");
    }
  }
  read(j, "grading", s.grading);
  read(j, "tol", s.tol);
  read(j, "max_iter", s.max_iter);
  read(j, "schedule", s.schedule);
  read(j, "observe_radius", s.observe_radius);
  read(j, "exhaust_tol", s.exhaust_tol);
  read(j, "compat", s.compat);
  read(j, "path", s.path);
  read(j, "eps", s.eps);
  read(j, "deterministic", s.deterministic);
  read(j, "suite", s.suite);
  read(j, "samples", s.samples);
  read(j, "seed", s.seed);
  read(j, "out", s.out);
  s.validate();
  return s;
}

void JobSpec::validate() const {
  const auto& names = command_names();
  if (std::find(names.begin(), names.end(), command) == names.end())
    throw UsageError("unknown command: '" + command + "'");
  if (n < 1 || n > 12) throw UsageError("n must lie in [1, 12]");
  if (!(radius > 0.0 && radius < 1.0)) throw UsageError("radius must lie in (0, 1)");
  if (nr < 4 || nt < 8 || nt % 2 != 0) throw UsageError("grid needs nr >= 4 and an even nt >= 8");
  if (!(grading > 0.0 && grading <= 1.0)) throw UsageError("grading must lie in (0, 1]");
  if (!(tol > 0.0)) throw UsageError("tol must be positive");
  if (max_iter < 1) throw UsageError("max_iter must be positive");
  for (const double r : schedule)
    if (!(r > 0.0 && r < 1.0)) throw UsageError("schedule radii must lie in (0, 1)");
  if (!std::is_sorted(schedule.begin(), schedule.end())) throw UsageError("schedule must be increasing");
  if (!(observe_radius > 0.0 && observe_radius < 1.0)) throw UsageError("observe_radius must lie in (0, 1)");
  if (path != "matrix" && path != "toda") throw UsageError("path must be 'toda' or 'matrix'");
  if (!(hM > 0.0) || !(hL > 0.0)) throw UsageError("flat metric constants must be positive");
  if (samples < 1) throw UsageError("samples must be positive");
  if (command == "verify") {
    if (target != "linalg") throw UsageError("verify target must be 'linalg'");
    if (suite != "triangular" && suite != "cyclic" && suite != "closeness")
      throw UsageError("suite must be triangular, cyclic or closeness");
  }
  if (command == "classify-ab" && f.empty()) throw UsageError("classify-ab needs --f");
  if (command == "gauge-normalize" && theta.is_null()) throw UsageError("gauge-normalize needs --theta");
}

std::pair<int, int> parse_grid(const std::string& text) {
  static const std::regex re(R"(^\s*(\d+)\s*(?:x|X|\*|×)\s*(\d+)\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, re)) throw UsageError("grid must look like 64x128: " + text);
  return {std::stoi(m[1]), std::stoi(m[2])};
}

json json_arg(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error&) {
  }
  std::ifstream in(text);
  if (!in) throw UsageError("not valid JSON and not a readable file: " + text);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw UsageError("malformed JSON in " + text + ": " + e.what());
  }
}

}  // namespace lab
