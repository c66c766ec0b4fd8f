#pragma once

#include <string>

#include "hitchin/bundle.hpp"
#include "hitchin/rational.hpp"
#include "hitchin/solver.hpp"

// Text formats shared by the CLI and tests. Throws std::invalid_argument on malformed input.
//
// A polynomial is a JSON number (a constant) or an array of coefficients, lowest degree
// first. A coefficient is a number, a [re, im] pair, or a string "p/q" (exact parsers only).
// A differential tuple is {"n": 3, "q": {"2": [...], "3": [...]}}; the bare object
// {"2": [...]} is accepted when n is supplied separately.
namespace hitchin::io {

Poly parse_poly(const std::string& json);
std::string poly_json(const Poly& p);

DifferentialTuple parse_tuple(const std::string& json, int n = 0);
std::string tuple_json(const DifferentialTuple& q);

// {"theta": [[p, p, ...], ...]} or a bare nested array; entries are exact polynomials.
exact::QPolyMatrix parse_qpoly_matrix(const std::string& json);
std::string qpoly_json(const exact::QPoly& p);  // coefficients as ["re", "im"] rational strings

std::string solve_report_json(const solver::SolveReport& r);

// Header r,theta then Re/Im of each upper-triangular entry; one row per node.
std::string metric_csv(const MetricField& H);
// Plain "r theta value" columns with blank lines between rings, for gnuplot splot.
std::string scalar_gnuplot(const Grid& grid, const std::vector<double>& values);

}  // namespace hitchin::io
