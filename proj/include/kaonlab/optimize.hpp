#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

namespace kaonlab::optimize {

struct NelderMeadOptions {
  int max_iterations = 2000;
  double x_tolerance = 1e-12;  ///< simplex diameter, absolute
  double f_tolerance = 1e-12;  ///< spread of vertex values, relative to 1 + |best|
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Derivative-free downhill simplex (standard reflection/expansion/contraction/
/// shrink coefficients 1, 2, 1/2, 1/2). `step` sets the initial edge per axis.
template <typename F>
NelderMeadResult nelder_mead(F&& f, const Eigen::VectorXd& start, const Eigen::VectorXd& step,
                             const NelderMeadOptions& options = {}) {
  const Eigen::Index n = start.size();
  std::vector<Eigen::VectorXd> simplex;
  std::vector<double> values;
  simplex.push_back(start);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd v = start;
    v(i) += step(i);
    simplex.push_back(v);
  }
  for (const auto& v : simplex) values.push_back(f(v));

  std::vector<std::size_t> order(simplex.size());
  NelderMeadResult result;
  for (result.iterations = 0; result.iterations < options.max_iterations; ++result.iterations) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[order.size() - 2];

    double diameter = 0.0;
    for (const auto& v : simplex) diameter = std::max(diameter, (v - simplex[best]).lpNorm<Eigen::Infinity>());
    if (diameter < options.x_tolerance && values[worst] - values[best] < options.f_tolerance * (1.0 + std::abs(values[best]))) {
      result.converged = true;
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i < simplex.size(); ++i) {
      if (i != worst) centroid += simplex[i];
    }
    centroid /= static_cast<double>(n);

    const Eigen::VectorXd reflected = centroid + (centroid - simplex[worst]);
    const double f_reflected = f(reflected);
    if (f_reflected < values[best]) {
      const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - simplex[worst]);
      const double f_expanded = f(expanded);
      if (f_expanded < f_reflected) {
        simplex[worst] = expanded;
        values[worst] = f_expanded;
      } else {
        simplex[worst] = reflected;
        values[worst] = f_reflected;
      }
      continue;
    }
    if (f_reflected < values[second]) {
      simplex[worst] = reflected;
      values[worst] = f_reflected;
      continue;
    }
    const bool outside = f_reflected < values[worst];
    const Eigen::VectorXd contracted =
        outside ? Eigen::VectorXd(centroid + 0.5 * (reflected - centroid))
                : Eigen::VectorXd(centroid + 0.5 * (simplex[worst] - centroid));
    const double f_contracted = f(contracted);
    if (f_contracted < (outside ? f_reflected : values[worst])) {
      simplex[worst] = contracted;
      values[worst] = f_contracted;
      continue;
    }
    for (std::size_t i = 0; i < simplex.size(); ++i) {
      if (i == best) continue;
      simplex[i] = simplex[best] + 0.5 * (simplex[i] - simplex[best]);
      values[i] = f(simplex[i]);
    }
  }
  const auto best = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
  result.x = simplex[best];
  result.value = values[best];
  return result;
}

}  // namespace kaonlab::optimize
