#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "kaonlab/io.hpp"

/// Ingoing mode coupled to discretized outgoing continua.
///
/// Amplitudes are in the interaction picture: c_in = d_in e^{i w_in t},
/// c_k = d_k e^{i w_k t}, so that
///   dc_in/dt = -i sum_k conj(G_k) c_k e^{-i (w_k - w_in) t}
///   dc_k/dt  = -i G_k c_in e^{ i (w_k - w_in) t}.
/// The system is unitary: |c_in|^2 + sum_k |c_k|^2 is conserved.
namespace kaonlab::golden_rule {

struct ModeChannel {
  int species = 0;  ///< zero-based decay-product species
  int label = 0;    ///< internal degree of freedom within the species
  double omega = 0.0;
  std::complex<double> coupling;
};

/// Piecewise-linear function on a strictly increasing grid.
struct TabulatedFunction {
  std::vector<double> x;
  std::vector<double> y;

  /// Linear interpolation. Throws ResolutionError outside [x.front(), x.back()].
  double at(double where) const;
};

/// Density of states and |G(w)|^2 of one (species, label) continuum.
struct ContinuumSpec {
  int species = 0;
  int label = 0;
  TabulatedFunction dos;
  TabulatedFunction coupling_sq;
};

struct ModeSystem {
  double omega_in = 0.0;
  std::vector<ModeChannel> channels;
  std::vector<ContinuumSpec> continua;

  int species_count() const;
};

/// Throws ValidationError on non-finite couplings or unsorted continuum grids.
void validate(const ModeSystem& sys);

struct IntegrateOptions {
  /// Keep every `record_stride`-th step (the final step is always kept).
  int record_stride = 1;
  /// Store per-channel amplitudes; species norms are always stored.
  bool record_channels = true;
  std::complex<double> initial_in{1.0, 0.0};
  /// Initial outgoing amplitudes; empty means all zero.
  Eigen::VectorXcd initial_out;
  double norm_tolerance = 1e-6;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<std::complex<double>> c_in;
  /// rows: recorded times, cols: species; sum of |c_k|^2 over the species' channels.
  Eigen::MatrixXd species_norm;
  /// rows: recorded times, cols: channels (empty unless record_channels).
  Eigen::MatrixXcd c_out;
  double max_norm_drift = 0.0;
};

/// Classical fixed-step RK4 over [0, t_max]. Throws IntegratorFailure when the
/// total norm drifts by more than options.norm_tolerance.
Trajectory integrate(const ModeSystem& sys, double t_max, int n_steps, const IntegrateOptions& options = {});

/// |G|^2 t^2 sinc^2(detuning t / 2): first-order occupation of one outgoing mode.
double perturbative_occupation(double coupling_mag, double detuning, double t);

struct GammaBreakdown {
  std::vector<double> per_species;
  double total = 0.0;
};

/// Gamma_i = sum over labels of 2 pi rho_i(w_in) |G_i(w_in)|^2.
GammaBreakdown golden_rule_gamma(std::span<const ContinuumSpec> continua, double omega_in);

struct EffectiveMode {
  std::vector<int> channel_indices;
  Eigen::VectorXcd weights;  ///< G_k / g_eff, unit norm
  double g_eff = 0.0;
};

/// The superposition of channels at frequency `omega` (within `tolerance`) that
/// couples to the ingoing mode. Throws EmptySector if no channel matches.
EffectiveMode effective_mode(const ModeSystem& sys, double omega, double tolerance = 1e-12);

/// t * integral of sinc^2(x t / 2) over [-half_width, half_width]; tends to 2 pi.
/// Throws ResolutionError if the window tail can exceed 1% of the limit.
double sinc_delta_check(double t, double half_width = 200.0);

/// Uniform frequency comb per species centered on omega_in. Each species gets
/// round(bandwidth / spacing) modes with |G|^2 = Gamma_i spacing / (2 pi).
ModeSystem flat_continuum(std::span<const double> species_gammas, double omega_in, double spacing,
                          double bandwidth);

/// -slope of a least-squares line through log|c_in|^2 over recorded t in [t_lo, t_hi].
double fit_decay_constant(const Trajectory& traj, double t_lo, double t_hi);

/// Species share of the outgoing norm at the last recorded time.
std::vector<double> branching_fractions(const Trajectory& traj);

/// Flat-continuum experiment described in units of the total target width.
struct Scenario {
  std::vector<double> species_gammas{1.0};
  double spacing_over_gamma = 0.02;
  double bandwidth_over_gamma = 40.0;
  double t_max_times_gamma = 8.0;

  double total_gamma() const;
  static Scenario from_key_values(const KeyValues& kv);
  KeyValues to_key_values() const;
};

struct ScenarioResult {
  GammaBreakdown predicted;
  double fitted_gamma = 0.0;
  std::vector<double> branching;
  Trajectory trajectory;
  int n_steps = 0;
};

/// Builds the comb, integrates with step <= min(2 pi / W, 1 / Gamma) / 40 and fits
/// log|c_in|^2 over t in [0.5, 3] / Gamma.
ScenarioResult run_scenario(const Scenario& scenario);

/// `t,re_c_in,im_c_in,norm_out_species_1,...`
std::string trajectory_csv(const Trajectory& traj);

}  // namespace kaonlab::golden_rule
