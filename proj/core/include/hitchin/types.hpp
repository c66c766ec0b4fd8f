#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace hitchin {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

// Thrown when an input violates a stated precondition (maps to CLI exit 3).
class HypothesisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown when a metric stops being positive definite; carries the node.
class PDViolation : public std::runtime_error {
 public:
  PDViolation(const std::string& what, int node) : std::runtime_error(what), node_(node) {}
  int node() const { return node_; }

 private:
  int node_;
};

}  // namespace hitchin
