#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qrot/errors.hpp"

namespace qrot {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss rule for the weight x^a e^{-x} on [0, inf), a > -1, via the
/// Golub-Welsch eigenproblem of the Jacobi matrix.
inline QuadratureRule gauss_laguerre(int points, double a) {
  if (points < 1) throw ArgumentError("gauss_laguerre: need at least one node");
  if (!(a > -1.0)) throw ArgumentError("gauss_laguerre: weight exponent must exceed -1");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(points, points);
  for (int i = 0; i < points; ++i) {
    jacobi(i, i) = 2.0 * i + a + 1.0;
    if (i > 0) {
      const double b = std::sqrt(i * (i + a));
      jacobi(i, i - 1) = b;
      jacobi(i - 1, i) = b;
    }
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jacobi);
  const double mu0 = std::tgamma(a + 1.0);
  QuadratureRule rule;
  for (int i = 0; i < points; ++i) {
    rule.nodes.push_back(es.eigenvalues()(i));
    const double v = es.eigenvectors()(0, i);
    rule.weights.push_back(mu0 * v * v);
  }
  return rule;
}

}  // namespace qrot
