#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kaonlab/model.hpp"
#include "kaonlab/params.hpp"

namespace kaonlab {

/// A(t) sampled on a time grid (units of tau_S). `sigma` is empty or has one
/// entry per point.
struct AsymmetryCurve {
  std::vector<double> times;
  std::vector<double> values;
  std::vector<double> sigma;
  Model model;
};

/// A_pipi(t) = (P_K0bar - P_K0) / (P_K0 + P_K0bar) for the two-pion channel.
/// The channel width cancels and is never multiplied in.
double asymmetry_at(const DecayModel& model, double t);
double asymmetry_at(const Model& model, double t, const KaonPhysics& physics);

/// t >> tau_S limit: 2 Re(eps) for WWA, 2 Re(eps_s_tilde) for TWF.
double large_t_limit(const Model& model, const KaonPhysics& physics);

/// Uniform-grid sampling of asymmetry_at. `threads` splits the grid; the result
/// does not depend on it.
AsymmetryCurve asymmetry_curve(const Model& model, double t_min, double t_max, int n_points,
                               const KaonPhysics& physics, int threads = 1);

struct Discrepancy {
  double max_abs_diff = 0.0;
  double argmax_t = 0.0;
  std::optional<double> n_sigma;
};

/// Largest |a - b| over grid points with t in [t_lo, t_hi]. If `a` carries
/// uncertainties, n_sigma is the largest |a - b| / sigma_a in the window.
Discrepancy discrepancy(const AsymmetryCurve& a, const AsymmetryCurve& b, double t_lo, double t_hi);

/// Asymmetry of the two-pion counts integrated over each bin [edges[i], edges[i+1]].
std::vector<double> binned_model_asymmetry(const DecayModel& model, std::span<const double> edges);

/// CSV with header `t_over_tau_s,value[,sigma]`, 12 significant digits.
std::string to_csv(const AsymmetryCurve& curve);

}  // namespace kaonlab
