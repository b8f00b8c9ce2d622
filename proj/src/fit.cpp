#include "kaonlab/fit.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "kaonlab/asymmetry.hpp"
#include "kaonlab/errors.hpp"
#include "kaonlab/optimize.hpp"

namespace kaonlab::fit {
namespace {

constexpr double kDegree = std::numbers::pi / 180.0;

struct UsableBins {
  std::vector<double> edges_lo;
  std::vector<double> edges_hi;
  std::vector<double> values;
  std::vector<double> sigma;
};

UsableBins usable(const events::BinnedAsymmetry& data) {
  UsableBins u;
  for (std::size_t b = 0; b < data.bins(); ++b) {
    if (!data.valid[b] || !(data.sigma[b] > 0.0)) continue;
    u.edges_lo.push_back(data.bin_edges[b]);
    u.edges_hi.push_back(data.bin_edges[b + 1]);
    u.values.push_back(data.values[b]);
    u.sigma.push_back(data.sigma[b]);
  }
  return u;
}

double chi2_usable(const UsableBins& bins, const DecayModel& model) {
  double chi2 = 0.0;
  for (std::size_t i = 0; i < bins.values.size(); ++i) {
    const double edges[2] = {bins.edges_lo[i], bins.edges_hi[i]};
    const double expected = binned_model_asymmetry(model, edges).front();
    const double pull = (bins.values[i] - expected) / bins.sigma[i];
    chi2 += pull * pull;
  }
  return chi2;
}

double chi2_epsilon(const UsableBins& bins, const KaonPhysics& physics, std::complex<double> eps) {
  try {
    return chi2_usable(bins, DecayModel(Model::wwa(), with_epsilon(physics, eps)));
  } catch (const ValidationError&) {
    return std::numeric_limits<double>::infinity();
  }
}

}  // namespace

double FitResult::abs_epsilon_sigma() const {
  const double a = std::abs(epsilon_hat);
  if (a == 0.0) return std::sqrt(std::max(covariance(0, 0), covariance(1, 1)));
  const Eigen::Vector2d j(epsilon_hat.real() / a, epsilon_hat.imag() / a);
  return std::sqrt(std::max(0.0, j.dot(covariance * j)));
}

double chi2_for_epsilon(const events::BinnedAsymmetry& data, const KaonPhysics& physics,
                        std::complex<double> epsilon) {
  return chi2_epsilon(usable(data), physics, epsilon);
}

FitResult fit_epsilon(const events::BinnedAsymmetry& data, const KaonPhysics& physics, const FitOptions& options) {
  const UsableBins bins = usable(data);
  if (bins.values.size() < 5) throw ValidationError("fit needs at least 5 non-empty bins with sigma > 0");
  if (options.grid_abs_points < 2 || options.grid_arg_points < 2) throw ValidationError("pre-scan grid too small");
  auto objective = [&](const Eigen::VectorXd& x) {
    return chi2_epsilon(bins, physics, {x(0), x(1)});
  };

  // Coarse pre-scan; the origin (eps = 0) is its first point.
  Eigen::VectorXd start = Eigen::VectorXd::Zero(2);
  double best = objective(start);
  for (int i = 0; i < options.grid_abs_points; ++i) {
    const double mag = options.grid_abs_max * i / (options.grid_abs_points - 1);
    for (int j = 0; j < options.grid_arg_points; ++j) {
      const double arg = options.grid_arg_max_degrees * kDegree * j / (options.grid_arg_points - 1);
      Eigen::VectorXd x(2);
      x << mag * std::cos(arg), mag * std::sin(arg);
      const double v = objective(x);
      if (v < best) {
        best = v;
        start = x;
      }
    }
  }

  const double cell = options.grid_abs_max / (options.grid_abs_points - 1);
  optimize::NelderMeadOptions nm;
  nm.max_iterations = options.max_iterations;
  nm.x_tolerance = 1e-11;
  nm.f_tolerance = 1e-12;
  const auto minimum = optimize::nelder_mead(objective, start, Eigen::Vector2d::Constant(cell / 2), nm);

  FitResult r;
  r.epsilon_hat = {minimum.x(0), minimum.x(1)};
  r.chi2 = minimum.value;
  r.ndf = static_cast<int>(bins.values.size()) - 2;

  // Hessian of chi2 by central differences.
  const double h = std::max(1e-6, 1e-2 * std::abs(r.epsilon_hat));
  Eigen::Matrix2d hess;
  const Eigen::Vector2d x0 = minimum.x;
  auto at = [&](double dx, double dy) { return objective(Eigen::Vector2d(x0(0) + dx, x0(1) + dy)); };
  const double f0 = minimum.value;
  hess(0, 0) = (at(h, 0) - 2 * f0 + at(-h, 0)) / (h * h);
  hess(1, 1) = (at(0, h) - 2 * f0 + at(0, -h)) / (h * h);
  hess(0, 1) = hess(1, 0) = (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4 * h * h);

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(hess);
  const bool positive = eig.info() == Eigen::Success && eig.eigenvalues().minCoeff() > 0.0 &&
                        std::isfinite(eig.eigenvalues().maxCoeff());
  if (positive) {
    const Eigen::Matrix2d inv = eig.eigenvectors() * eig.eigenvalues().cwiseInverse().asDiagonal() *
                                eig.eigenvectors().transpose();
    r.covariance = 2.0 * inv;
  } else {
    r.covariance.setConstant(std::numeric_limits<double>::infinity());
  }
  r.converged = minimum.converged && positive;
  return r;
}

ModelChi2 model_chi2(const Model& model, const events::BinnedAsymmetry& data, const KaonPhysics& physics) {
  const UsableBins bins = usable(data);
  if (bins.values.empty()) throw ValidationError("no usable bins in the data");
  ModelChi2 r;
  r.chi2 = chi2_usable(bins, DecayModel(model, physics));
  r.ndf = static_cast<int>(bins.values.size());
  r.n_sigma = (r.chi2 - r.ndf) / std::sqrt(2.0 * r.ndf);
  return r;
}

nlohmann::json to_json(const FitResult& r) {
  auto finite_or_null = [](double v) -> nlohmann::json {
    if (std::isfinite(v)) return v;
    return nullptr;
  };
  return {{"epsilon_hat", {{"re", r.epsilon_hat.real()}, {"im", r.epsilon_hat.imag()},
                           {"abs", std::abs(r.epsilon_hat)},
                           {"arg_degrees", std::arg(r.epsilon_hat) / kDegree}}},
          {"abs_epsilon_sigma", finite_or_null(r.abs_epsilon_sigma())},
          {"chi2", r.chi2},
          {"ndf", r.ndf},
          {"covariance",
           {{finite_or_null(r.covariance(0, 0)), finite_or_null(r.covariance(0, 1))},
            {finite_or_null(r.covariance(1, 0)), finite_or_null(r.covariance(1, 1))}}},
          {"converged", r.converged}};
}

nlohmann::json to_json(const ModelChi2& r) {
  return {{"chi2", r.chi2}, {"ndf", r.ndf}, {"n_sigma", r.n_sigma}};
}

}  // namespace kaonlab::fit
