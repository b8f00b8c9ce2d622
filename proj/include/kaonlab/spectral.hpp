#pragma once

#include <complex>
#include <string>
#include <vector>

/// Exponential decay seen from the energy side: a Breit-Wigner line shape
/// versus the Fourier transform of a temporal wave function.
///
/// Units: energies and widths in any angular-frequency unit, times in its
/// inverse (hbar = 1).
namespace kaonlab::spectral {

struct BreitWignerParams {
  double m = 0.0;
  double gamma = 1.0;
};

/// Energy grid and density |psi(E)|^2 (or any real line shape) on it.
struct EnergyDensity {
  std::vector<double> grid;
  std::vector<double> density;
};

/// Energy grid and complex amplitude on it.
struct EnergyAmplitude {
  std::vector<double> grid;
  std::vector<std::complex<double>> values;
};

/// Uniform energy grid [m - half_width_over_gamma * Gamma, m + ...] with
/// points_per_gamma samples per Gamma.
struct GridSpec {
  double half_width_over_gamma = 2000.0;
  double points_per_gamma = 50.0;
};

/// (Gamma / 2 pi) / ((E - m)^2 + (Gamma / 2)^2)
double breit_wigner_density(double energy, const BreitWignerParams& p);

/// Breit-Wigner tabulated on the grid and renormalized to unit mass over it.
EnergyDensity tabulate_breit_wigner(const BreitWignerParams& p, const GridSpec& spec = {});

/// Simpson integral of the density over its grid.
double total_mass(const EnergyDensity& density);

/// |integral dE e^{-iEt} |psi(E)|^2|^2. Requires unit mass (1e-6) and a grid
/// step small enough that step * |t| <= 0.5.
double survival_from_energy_density(const EnergyDensity& density, double t);

/// -i sqrt(Gamma / 2 pi) / (E - (m - i Gamma / 2)): Fourier transform of the
/// temporal wave function sqrt(Gamma) theta(t) e^{-i (m - i Gamma/2) t}.
std::complex<double> twf_energy_amplitude(double energy, const BreitWignerParams& p);

EnergyAmplitude tabulate_twf_amplitude(const BreitWignerParams& p, const GridSpec& spec = {});

/// sqrt(Gamma) e^{-i (m - i Gamma/2) t} for t >= 0, zero before.
std::complex<double> twf_time_amplitude(double t, const BreitWignerParams& p);

/// integral_t^infinity |twf_time_amplitude|^2 dt' by quadrature.
double twf_survival(double t, const BreitWignerParams& p);

struct TimeGridSpec {
  double t_max_times_gamma = 5.0;
  int points = 51;
};

struct EquivalenceReport {
  /// max | |psi_twf(E)|^2 - BW(E) | / BW(m) on the energy grid.
  double max_density_deviation = 0.0;
  /// max |P_standard(t) - e^{-Gamma t}| on the time grid.
  double max_standard_survival_deviation = 0.0;
  /// max |P_twf(t) - e^{-Gamma t}|.
  double max_twf_survival_deviation = 0.0;
  /// max |P_standard(t) - P_twf(t)|.
  double max_survival_deviation = 0.0;
  std::vector<double> times;
  std::vector<double> standard_survival;
  std::vector<double> twf_survival;
};

/// Compares the two readings of a Breit-Wigner line: line shape from the
/// transformed temporal wave function against the normalized Breit-Wigner, and
/// survival from the Fourier transform of the density against the integrated
/// decay-time density. Throws ResolutionError on degenerate grids.
EquivalenceReport equivalence_report(const BreitWignerParams& p, const GridSpec& energy = {},
                                     const TimeGridSpec& time = {});

/// `x,value` CSV with 12 significant digits.
std::string curve_csv(const std::string& x_name, const std::vector<double>& x, const std::vector<double>& values);

}  // namespace kaonlab::spectral
