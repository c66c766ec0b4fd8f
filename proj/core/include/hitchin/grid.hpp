#pragma once

#include <memory>
#include <vector>

#include "hitchin/types.hpp"

namespace hitchin {

// Polar grid on the closed disk |z| <= radius.
//
// Radial nodes are r_i = phi(s_i) with s_i = (i + 1/2) ds, ds = 1/(nr - 1/2), so the
// last node sits on the boundary and no node sits at the origin. phi is odd and
// smooth, phi(s) ~ a s + (1 - a) sin(pi s / 2), which packs nodes toward the rim.
// The Laplacian is the finite-volume form with zero flux through r = 0; first
// derivatives on the innermost ring use the antipodal node as the reflected
// neighbour (nt must be even).
class Grid {
 public:
  Grid(double radius, int nr, int nt, double grading = 0.5);

  double radius() const { return radius_; }
  int nr() const { return nr_; }
  int nt() const { return nt_; }
  double grading() const { return grading_; }
  int size() const { return nr_ * nt_; }
  int interior_size() const { return (nr_ - 1) * nt_; }
  double dtheta() const { return dtheta_; }

  double r(int i) const { return r_[static_cast<size_t>(i)]; }
  double theta(int j) const { return dtheta_ * j; }
  cplx z(int i, int j) const { return std::polar(r(i), theta(j)); }
  cplx z(int node) const { return z(node / nt_, node % nt_); }
  int index(int i, int j) const { return i * nt_ + ((j % nt_) + nt_) % nt_; }
  int ring(int node) const { return node / nt_; }
  bool on_boundary(int node) const { return node / nt_ == nr_ - 1; }

  // Five-point Laplacian weights at interior ring i (east = i+1, west = i-1).
  double lap_east(int i) const { return lap_e_[static_cast<size_t>(i)]; }
  double lap_west(int i) const { return lap_w_[static_cast<size_t>(i)]; }
  double lap_theta(int i) const { return lap_t_[static_cast<size_t>(i)]; }
  double lap_center(int i) const { return -(lap_east(i) + lap_west(i) + 2.0 * lap_theta(i)); }

  // Node playing the role of (i-1, j) in centred first differences.
  int west_node(int i, int j) const { return i > 0 ? index(i - 1, j) : index(0, j + nt_ / 2); }
  double west_r(int i) const { return i > 0 ? r(i - 1) : -r(0); }

  // Cartesian derivative stencil at interior node (i,j): value = sum_k w[k] f[nodes[k]].
  struct Deriv {
    int nodes[4];
    double wx[4];
    double wy[4];
  };
  Deriv deriv(int i, int j) const;

  // Quadrature weight (cell area) attached to each node, boundary nodes get half cells.
  double cell_area(int i) const { return area_[static_cast<size_t>(i)]; }

  // Discrete Laplacian of a scalar field at an interior node.
  double laplacian(const std::vector<double>& f, int i, int j) const;

  // Value at the centre, closed by averaging the innermost ring.
  template <class T>
  T center_value(const std::vector<T>& f) const {
    T acc = f[0];
    for (int j = 1; j < nt_; ++j) acc = acc + f[static_cast<size_t>(j)];
    return acc * (1.0 / nt_);
  }

 private:
  double radius_;
  int nr_, nt_;
  double grading_;
  double dtheta_;
  std::vector<double> r_, lap_e_, lap_w_, lap_t_, area_;
};

using GridPtr = std::shared_ptr<const Grid>;

inline GridPtr make_grid(double radius, int nr, int nt, double grading = 0.5) {
  return std::make_shared<const Grid>(radius, nr, nt, grading);
}

}  // namespace hitchin
