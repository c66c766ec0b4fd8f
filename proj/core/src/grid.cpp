#include "hitchin/grid.hpp"

#include <cmath>

namespace hitchin {

Grid::Grid(double radius, int nr, int nt, double grading)
    : radius_(radius), nr_(nr), nt_(nt), grading_(grading), dtheta_(2.0 * kPi / nt) {
  if (!(radius > 0.0 && radius < 1.0)) throw std::invalid_argument("grid radius must lie in (0,1)");
  if (nr < 3) throw std::invalid_argument("grid needs at least 3 radial nodes");
  if (nt < 4 || nt % 2 != 0) throw std::invalid_argument("angular node count must be even and >= 4");
  if (!(grading > 0.0 && grading <= 1.0)) throw std::invalid_argument("grading must lie in (0,1]");

  const double ds = 1.0 / (nr - 0.5);
  const double a = grading;
  auto phi = [&](double s) { return radius * (a * s + (1.0 - a) * std::sin(0.5 * kPi * s)); };
  r_.resize(static_cast<size_t>(nr));
  for (int i = 0; i < nr; ++i) r_[static_cast<size_t>(i)] = phi((i + 0.5) * ds);
  r_.back() = radius;

  lap_e_.assign(static_cast<size_t>(nr), 0.0);
  lap_w_.assign(static_cast<size_t>(nr), 0.0);
  lap_t_.assign(static_cast<size_t>(nr), 0.0);
  area_.assign(static_cast<size_t>(nr), 0.0);
  for (int i = 0; i < nr; ++i) {
    const double ri = r(i);
    const double rm = i == 0 ? 0.0 : 0.5 * (r(i - 1) + ri);
    const double rp = i == nr - 1 ? radius : 0.5 * (ri + r(i + 1));
    const double area = 0.5 * (rp * rp - rm * rm);
    area_[static_cast<size_t>(i)] = area * dtheta_;
    if (i == nr - 1) continue;
    lap_e_[static_cast<size_t>(i)] = rp / (r(i + 1) - ri) / area;
    lap_w_[static_cast<size_t>(i)] = i == 0 ? 0.0 : rm / (ri - r(i - 1)) / area;
    lap_t_[static_cast<size_t>(i)] = 1.0 / (ri * ri * dtheta_ * dtheta_);
  }
}

Grid::Deriv Grid::deriv(int i, int j) const {
  Deriv d{};
  const double th = theta(j);
  const double c = std::cos(th), s = std::sin(th), ri = r(i);
  const double dr = 1.0 / (r(i + 1) - west_r(i));
  const double dt = 1.0 / (2.0 * dtheta_);
  d.nodes[0] = index(i + 1, j);
  d.nodes[1] = west_node(i, j);
  d.nodes[2] = index(i, j + 1);
  d.nodes[3] = index(i, j - 1);
  const double fr[4] = {dr, -dr, 0.0, 0.0};
  const double ft[4] = {0.0, 0.0, dt, -dt};
  for (int k = 0; k < 4; ++k) {
    d.wx[k] = c * fr[k] - s / ri * ft[k];
    d.wy[k] = s * fr[k] + c / ri * ft[k];
  }
  return d;
}

double Grid::laplacian(const std::vector<double>& f, int i, int j) const {
  const int p = index(i, j);
  double acc = lap_center(i) * f[static_cast<size_t>(p)];
  acc += lap_east(i) * f[static_cast<size_t>(index(i + 1, j))];
  if (i > 0) acc += lap_west(i) * f[static_cast<size_t>(index(i - 1, j))];
  acc += lap_theta(i) * (f[static_cast<size_t>(index(i, j + 1))] + f[static_cast<size_t>(index(i, j - 1))]);
  return acc;
}

}  // namespace hitchin
