#pragma once

// Reference computations that do not go through the library's solvers.

#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace oracle {

// u(r) solving (1/4)(u'' + u'/r) = F(r, u), u'(0) = 0, u(R) = uR, sampled at `radii`
// (ascending, all <= R). Shooting on u(0) with RK4 and bisection; F must increase in u.
inline std::vector<double> radial_bvp(const std::function<double(double, double)>& F, double R, double uR,
                                      const std::vector<double>& radii, double h = 2e-5) {
  using State = std::array<double, 2>;
  boost::numeric::odeint::runge_kutta4<State> rk;
  auto rhs = [&](const State& y, State& dy, double r) {
    dy[0] = y[1];
    dy[1] = 4.0 * F(r, y[0]) - y[1] / r;
  };
  // Integrates from the series start near 0; records values at `radii` if out != nullptr.
  auto shoot = [&](double s, std::vector<double>* out) {
    const double r0 = 1e-6;
    const double f0 = F(0.0, s);
    State y{s + f0 * r0 * r0, 2.0 * f0 * r0};
    double r = r0;
    size_t next = 0;
    while (out && next < radii.size() && radii[next] <= r0) out->push_back(s), ++next;
    while (r < R) {
      const double step = std::min(h, R - r);
      State prev = y;
      rk.do_step(rhs, y, r, step);
      if (std::isnan(y[0]) || y[0] > 60.0) return std::numeric_limits<double>::infinity();
      if (y[0] < -60.0) return -std::numeric_limits<double>::infinity();
      while (out && next < radii.size() && radii[next] <= r + step) {
        const double t = (radii[next] - r) / step;
        out->push_back((1 - t) * prev[0] + t * y[0]);
        ++next;
      }
      r += step;
    }
    return y[0];
  };
  double lo = uR - 1.0, hi = uR + 1.0;
  while (shoot(lo, nullptr) > uR) lo -= 2.0 * (hi - lo);
  while (shoot(hi, nullptr) < uR) hi += 0.5;
  auto [a, b] = boost::math::tools::bisect([&](double s) { return shoot(s, nullptr) - uR; }, lo, hi,
                                           boost::math::tools::eps_tolerance<double>(50));
  std::vector<double> out;
  shoot(0.5 * (a + b), &out);
  return out;
}

}  // namespace oracle
