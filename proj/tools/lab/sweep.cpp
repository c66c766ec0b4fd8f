#include "sweep.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "commands.hpp"
#include "hitchin/hyperbolic.hpp"

namespace lab {

using nlohmann::json;
namespace fs = std::filesystem;

std::vector<JobSpec> expand_sweep(const json& spec) {
  if (!spec.is_object() || !spec.contains("base") || !spec.contains("grid"))
    throw UsageError("sweep spec needs \"base\" and \"grid\"");
  for (const auto& [k, v] : spec.items())
    if (k != "base" && k != "grid") throw UsageError("unknown field in sweep spec: " + k);
  const json& grid = spec["grid"];
  if (!grid.is_object() || grid.empty()) throw UsageError("sweep grid must be a non-empty object");
  std::vector<std::string> keys;
  std::vector<json> values;
  for (const auto& [k, v] : grid.items()) {
    if (!v.is_array() || v.empty()) throw UsageError("sweep values for '" + k + "' must be a non-empty array");
    keys.push_back(k);
    values.push_back(v);
  }
  std::vector<JobSpec> jobs;
  std::vector<size_t> idx(keys.size(), 0);
  while (true) {
    json j = spec["base"];
    for (size_t a = 0; a < keys.size(); ++a) j[keys[a]] = values[a][idx[a]];
    jobs.push_back(JobSpec::from_json(j));
    size_t a = keys.size();
    while (a > 0) {
      --a;
      if (++idx[a] < values[a].size()) break;
      idx[a] = 0;
      if (a == 0) return jobs;
    }
  }
}

namespace {

std::string csv_field(const json& v) {
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string q = "\"";
    for (const char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  return s;
}

std::string scalar(const json& r, const json::json_pointer& p) {
  if (!r.contains(p)) return "";
  std::ostringstream os;
  os << std::setprecision(10) << r.at(p).get<double>();
  return os.str();
}

std::string max_entry(const json& r, const char* key) {
  if (!r.contains(key) || !r[key].is_array() || r[key].empty()) return "";
  double m = -INFINITY;
  for (const auto& x : r[key]) m = std::max(m, x.get<double>());
  std::ostringstream os;
  os << std::setprecision(10) << m;
  return os.str();
}

}  // namespace

SweepResult run_sweep(const json& spec, const std::string& out_dir) {
  const auto jobs = expand_sweep(spec);
  std::vector<Outcome> results(jobs.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < jobs.size(); i = next++) {
      results[i] = run(jobs[i]);
      if (!out_dir.empty()) write_artifacts(results[i], (fs::path(out_dir) / ("job_" + std::to_string(i))).string());
    }
  };
  const int k = std::min<int>(worker_count(), static_cast<int>(jobs.size()));
  std::vector<std::thread> pool;
  for (int t = 0; t < k; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::vector<std::string> keys;
  for (const auto& [key, v] : spec["grid"].items()) keys.push_back(key);
  SweepResult out;
  std::ostringstream os;
  os << "job";
  for (const auto& key : keys) os << ',' << key;
  os << ",status,exit_code,residual,min_energy,max_v,uniqueness_distance,error\n";
  for (size_t i = 0; i < jobs.size(); ++i) {
    const json& r = results[i].report;
    const json jj = jobs[i].to_json();
    os << i;
    for (const auto& key : keys) os << ',' << csv_field(key == "grid" ? json(jj["grid"]) : jj[key]);
    os << ',' << r["status"].get<std::string>() << ',' << results[i].exit_code << ','
       << scalar(r, "/solve/residual"_json_pointer) << ',' << scalar(r, "/energy/inf"_json_pointer) << ','
       << max_entry(r, "max_v") << ',' << scalar(r, "/distance"_json_pointer) << ','
       << (r.contains("error") ? csv_field(r["error"]) : "") << '\n';
    if (results[i].exit_code != kOk) ++out.failed;
  }
  out.csv = os.str();
  if (!out_dir.empty()) std::ofstream(fs::path(out_dir) / "sweep.csv") << out.csv;
  return out;
}

std::string constants_table(int max_n) {
  std::ostringstream os;
  os << "a_{k,n}\n  n |";
  for (int k = 1; k <= max_n; ++k) os << std::setw(12) << ("k=" + std::to_string(k));
  os << '\n';
  for (int n = 2; n <= max_n; ++n) {
    os << std::setw(3) << n << " |";
    for (int k = 1; k <= n; ++k) os << std::setw(12) << std::setprecision(6) << hitchin::hyperbolic::a_kn(k, n);
    os << '\n';
  }
  return os.str();
}

namespace {

void render_exhaust(std::ostringstream& os, const json& e, const std::string& label) {
  os << "  " << label << " d_m:";
  for (const auto& d : e["d"]) os << ' ' << std::setprecision(4) << d.get<double>();
  os << "\n  " << label << " d_m strictly decreasing: " << (e["d_decreasing"].get<bool>() ? "yes" : "no")
     << ", below tolerance: " << (e["converged"].get<bool>() ? "yes" : "no") << '\n';
}

}  // namespace

std::string render_report(const std::string& dir) {
  if (!fs::is_directory(dir)) throw UsageError("not a directory: " + dir);
  std::vector<fs::path> reports;
  for (const auto& entry : fs::recursive_directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().filename() == "report.json") reports.push_back(entry.path());
  std::sort(reports.begin(), reports.end());
  if (reports.empty()) throw UsageError("missing artifacts in " + dir + ": no report.json found");

  std::ostringstream os;
  os << constants_table(8) << '\n';
  std::vector<std::string> problems;
  for (const auto& path : reports) {
    json r;
    try {
      std::ifstream in(path);
      r = json::parse(in);
    } catch (const std::exception&) {
      problems.push_back(path.string() + ": unreadable");
      continue;
    }
    const std::string cmd = r.value("/job/command"_json_pointer, std::string("?"));
    os << "== " << fs::relative(path.parent_path(), dir).string() << "  [" << cmd << "]  status "
       << r.value("status", std::string("?")) << '\n';
    if (r.contains("error")) os << "  error: " << r["error"].get<std::string>() << '\n';
    if (r.contains("solve") && r["solve"].contains("residual"))
      os << "  residual " << r["solve"]["residual"].get<double>() << ", iterations "
         << r["solve"]["iterations"].get<int>() << '\n';
    if (r.contains("energy"))
      os << "  energy inf " << r["energy"]["inf"].get<double>() << " (bound " << r["energy"]["bound"].get<double>()
         << ")\n";
    if (r.contains("max_v")) os << "  max v_k " << r["max_v"].dump() << '\n';
    if (r.contains("exhaust")) render_exhaust(os, r["exhaust"], "");
    if (r.contains("distance")) {
      render_exhaust(os, r["a"], "a:");
      os << "  uniqueness distance " << r["distance"].get<double>() << ", extrapolated limit "
         << r.value("limit_distance", r["distance"].get<double>()) << '\n';
    }
    if (r.contains("class")) os << "  verdict " << r["class"]["verdict"].get<std::string>() << '\n';
    if (r.contains("verdict")) os << "  verdict " << r["verdict"].get<std::string>() << '\n';
    if (r.contains("charpoly_check")) os << "  charpoly check " << r["charpoly_check"].get<std::string>() << '\n';
    for (const char* f : {"field.csv", "energy.dat", "u.dat", "dm.csv"})
      if (fs::exists(path.parent_path() / f)) os << "  artifact " << f << '\n';
  }
  for (const auto& p : problems) os << "problem: " << p << '\n';
  return os.str();
}

}  // namespace lab
