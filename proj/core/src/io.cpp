#include "hitchin/io.hpp"

#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace hitchin::io {

using nlohmann::json;

namespace {

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
  }
}

cplx coeff(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw std::invalid_argument("coefficient must be a number or [re, im]: " + j.dump());
}

Poly poly_from(const json& j) {
  if (j.is_number()) return Poly::constant(j.get<double>());
  if (!j.is_array()) throw std::invalid_argument("polynomial must be a number or an array: " + j.dump());
  std::vector<cplx> c;
  for (const auto& x : j) c.push_back(coeff(x));
  return Poly(std::move(c));
}

json poly_to(const Poly& p) {
  json a = json::array();
  for (const cplx& c : p.c) {
    if (c.imag() == 0.0)
      a.push_back(c.real());
    else
      a.push_back({c.real(), c.imag()});
  }
  return a;
}

exact::Q rational(const json& j) {
  if (j.is_number_integer()) return exact::Q(j.get<long long>());
  if (j.is_number()) return exact::CQ::from_double(j.get<double>()).re;
  if (j.is_string()) {
    try {
      return exact::Q(j.get<std::string>());
    } catch (const std::exception&) {
      throw std::invalid_argument("not a rational: " + j.dump());
    }
  }
  throw std::invalid_argument("rational must be a number or \"p/q\": " + j.dump());
}

exact::CQ qcoeff(const json& j) {
  if (j.is_array()) {
    if (j.size() != 2) throw std::invalid_argument("complex coefficient needs [re, im]: " + j.dump());
    return {rational(j[0]), rational(j[1])};
  }
  return {rational(j), 0};
}

exact::QPoly qpoly_from(const json& j) {
  if (!j.is_array()) return exact::QPoly::constant(qcoeff(j));
  std::vector<exact::CQ> c;
  for (const auto& x : j) c.push_back(qcoeff(x));
  return exact::QPoly(std::move(c));
}

}  // namespace

Poly parse_poly(const std::string& text) { return poly_from(parse(text)); }

std::string poly_json(const Poly& p) { return poly_to(p).dump(); }

DifferentialTuple parse_tuple(const std::string& text, int n) {
  json j = parse(text);
  if (!j.is_object()) throw std::invalid_argument("differential tuple must be a JSON object");
  json q = j;
  if (j.contains("q")) {
    for (const auto& [k, v] : j.items())
      if (k != "n" && k != "q") throw std::invalid_argument("unknown field in tuple: " + k);
    if (j.contains("n")) n = j["n"].get<int>();
    q = j["q"];
  }
  if (n < 2) {
    for (const auto& [k, v] : q.items()) n = std::max(n, std::stoi(k));
  }
  if (n < 2) throw std::invalid_argument("rank n must be at least 2");
  DifferentialTuple t(n);
  for (const auto& [k, v] : q.items()) {
    int idx = 0;
    try {
      idx = std::stoi(k);
    } catch (const std::exception&) {
      throw std::invalid_argument("differential key must be an integer: " + k);
    }
    if (idx < 2 || idx > n) throw std::invalid_argument("differential index out of range: " + k);
    t.Q(idx) = poly_from(v);
  }
  return t;
}

std::string tuple_json(const DifferentialTuple& t) {
  json q = json::object();
  for (int j = 2; j <= t.n; ++j) q[std::to_string(j)] = poly_to(t.Q(j));
  return json{{"n", t.n}, {"q", q}}.dump();
}

exact::QPolyMatrix parse_qpoly_matrix(const std::string& text) {
  json j = parse(text);
  if (j.is_object()) {
    if (!j.contains("theta")) throw std::invalid_argument("expected a \"theta\" field");
    j = j["theta"];
  }
  if (!j.is_array() || j.empty()) throw std::invalid_argument("theta must be a non-empty square array");
  const int n = static_cast<int>(j.size());
  exact::QPolyMatrix m(n);
  for (int r = 0; r < n; ++r) {
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != n)
      throw std::invalid_argument("theta must be square");
    for (int c = 0; c < n; ++c) m(r, c) = qpoly_from(j[r][c]);
  }
  return m;
}

std::string qpoly_json(const exact::QPoly& p) {
  json a = json::array();
  for (const auto& c : p.c) a.push_back({c.re.str(), c.im.str()});
  return a.dump();
}

std::string solve_report_json(const solver::SolveReport& r) {
  json j{{"residual", r.residual},       {"iterations", r.iterations}, {"converged", r.converged},
         {"history", r.history},         {"det_drift", r.det_drift},   {"compat_defect", r.compat_defect},
         {"asym_residual", r.asym_residual},
         {"message", r.message}};
  return j.dump();
}

std::string metric_csv(const MetricField& H) {
  std::ostringstream os;
  os << std::setprecision(17);
  const int n = H.rank();
  os << "r,theta";
  for (int i = 0; i < n; ++i)
    for (int k = i; k < n; ++k) os << ",re_h" << i << k << ",im_h" << i << k;
  os << '\n';
  const Grid& g = *H.grid;
  for (int p = 0; p < g.size(); ++p) {
    os << g.r(p / g.nt()) << ',' << g.theta(p % g.nt());
    for (int i = 0; i < n; ++i)
      for (int k = i; k < n; ++k) {
        const cplx v = H.H[static_cast<size_t>(p)](i, k);
        os << ',' << v.real() << ',' << v.imag();
      }
    os << '\n';
  }
  return os.str();
}

std::string scalar_gnuplot(const Grid& g, const std::vector<double>& values) {
  std::ostringstream os;
  os << std::setprecision(12) << "# r theta value\n";
  for (int i = 0; i < g.nr(); ++i) {
    for (int j = 0; j <= g.nt(); ++j) {
      const int jj = j % g.nt();
      os << g.r(i) << ' ' << (j == g.nt() ? 2.0 * kPi : g.theta(jj)) << ' '
         << values[static_cast<size_t>(i * g.nt() + jj)] << '\n';
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace hitchin::io
