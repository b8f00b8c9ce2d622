#pragma once

#include <complex>

#include <Eigen/Dense>
#include <json.hpp>

#include "kaonlab/events.hpp"
#include "kaonlab/model.hpp"
#include "kaonlab/params.hpp"

namespace kaonlab::fit {

struct FitResult {
  std::complex<double> epsilon_hat;
  double chi2 = 0.0;
  int ndf = 0;
  /// Covariance of (Re eps, Im eps): 2 H^-1 with H the chi2 Hessian.
  Eigen::Matrix2d covariance = Eigen::Matrix2d::Zero();
  bool converged = false;

  /// Standard error of |eps_hat| propagated from the covariance.
  double abs_epsilon_sigma() const;
};

struct FitOptions {
  int grid_abs_points = 21;
  double grid_abs_max = 0.01;
  int grid_arg_points = 21;
  double grid_arg_max_degrees = 90.0;
  int max_iterations = 4000;
};

/// chi2 of binned data against the WWA asymmetry with the given epsilon. Only
/// valid bins with sigma > 0 contribute; the model is integrated over each bin.
double chi2_for_epsilon(const events::BinnedAsymmetry& data, const KaonPhysics& physics,
                        std::complex<double> epsilon);

/// Least-squares estimate of eps from binned two-pion asymmetry under WWA,
/// all other constants fixed. A coarse |eps| x arg(eps) grid picks the start of
/// a Nelder-Mead descent. Needs at least 5 usable bins.
FitResult fit_epsilon(const events::BinnedAsymmetry& data, const KaonPhysics& physics, const FitOptions& options = {});

struct ModelChi2 {
  double chi2 = 0.0;
  int ndf = 0;
  /// (chi2 - ndf) / sqrt(2 ndf)
  double n_sigma = 0.0;
};

/// chi2 of the data against a fully specified model (no free parameters).
ModelChi2 model_chi2(const Model& model, const events::BinnedAsymmetry& data, const KaonPhysics& physics);

nlohmann::json to_json(const FitResult& r);
nlohmann::json to_json(const ModelChi2& r);

}  // namespace kaonlab::fit
