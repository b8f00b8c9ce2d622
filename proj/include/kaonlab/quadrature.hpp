#pragma once

#include <cmath>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "kaonlab/errors.hpp"

namespace kaonlab::quad {

/// Gauss-Legendre rule on [-1, 1] by the Golub-Welsch eigenvalue method.
template <typename Scalar = double>
struct GaussLegendre {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> nodes;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> weights;

  explicit GaussLegendre(int order) {
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    Mat jacobi = Mat::Zero(order, order);
    for (int k = 1; k < order; ++k) {
      const Scalar b = Scalar(k) / std::sqrt(Scalar(4 * k * k - 1));
      jacobi(k, k - 1) = b;
      jacobi(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Mat> solver(jacobi);
    nodes = solver.eigenvalues();
    weights = Scalar(2) * solver.eigenvectors().row(0).transpose().array().square();
  }

  /// Integral of f over [a, b].
  template <typename F>
  auto integrate(F&& f, Scalar a, Scalar b) const {
    const Scalar half = (b - a) / 2;
    const Scalar mid = (a + b) / 2;
    decltype(f(mid)) sum{};
    for (Eigen::Index k = 0; k < nodes.size(); ++k) sum += weights(k) * f(mid + half * nodes(k));
    return sum * half;
  }

  /// Composite rule over `panels` equal panels of [a, b].
  template <typename F>
  auto integrate(F&& f, Scalar a, Scalar b, int panels) const {
    const Scalar width = (b - a) / panels;
    decltype(f(a)) sum{};
    for (int p = 0; p < panels; ++p) sum += integrate(f, a + width * p, a + width * (p + 1));
    return sum;
  }
};

/// Composite Simpson rule on a uniform sample (odd number of points), trapezoid
/// correction for the last interval otherwise.
template <typename Scalar>
Scalar simpson(std::span<const Scalar> values, double step) {
  const std::size_t n = values.size();
  if (n < 2) throw ResolutionError("quadrature needs at least two samples");
  if (n == 2) return Scalar((values[0] + values[1]) * (step / 2));
  const std::size_t last = (n % 2 == 1) ? n - 1 : n - 2;
  Scalar sum = values[0] + values[last];
  for (std::size_t i = 1; i < last; ++i) sum += values[i] * double(i % 2 == 1 ? 4 : 2);
  sum *= step / 3;
  if (last != n - 1) sum += (values[n - 2] + values[n - 1]) * (step / 2);
  return sum;
}

}  // namespace kaonlab::quad
