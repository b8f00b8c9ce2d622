#include "kaonlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "kaonlab/errors.hpp"
#include "kaonlab/grid.hpp"
#include "kaonlab/io.hpp"
#include "kaonlab/quadrature.hpp"

namespace kaonlab::spectral {
namespace {

constexpr double kPi = std::numbers::pi;

void require_width(const BreitWignerParams& p) {
  if (!(p.gamma > 0.0)) throw ValidationError("Breit-Wigner width must be positive");
}

std::vector<double> energy_grid(const BreitWignerParams& p, const GridSpec& spec) {
  require_width(p);
  const double half = spec.half_width_over_gamma * p.gamma;
  const double points = 2.0 * spec.half_width_over_gamma * spec.points_per_gamma + 1.0;
  if (!(half > 0.0) || !(points >= 3.0)) throw ResolutionError("energy grid needs at least three points");
  if (points > 5e7) throw ResolutionError("energy grid too large");
  return uniform_grid(p.m - half, p.m + half, static_cast<int>(std::lround(points)));
}

double grid_step(const std::vector<double>& grid) {
  if (grid.size() < 3) throw ResolutionError("energy grid needs at least three points");
  return (grid.back() - grid.front()) / static_cast<double>(grid.size() - 1);
}

}  // namespace

double breit_wigner_density(double energy, const BreitWignerParams& p) {
  require_width(p);
  const double x = energy - p.m;
  const double hw = p.gamma / 2;
  return p.gamma / (2.0 * kPi) / (x * x + hw * hw);
}

double total_mass(const EnergyDensity& d) {
  if (d.grid.size() != d.density.size()) throw ValidationError("density does not match its grid");
  return quad::simpson<double>(d.density, grid_step(d.grid));
}

EnergyDensity tabulate_breit_wigner(const BreitWignerParams& p, const GridSpec& spec) {
  EnergyDensity d;
  d.grid = energy_grid(p, spec);
  d.density.reserve(d.grid.size());
  for (double e : d.grid) d.density.push_back(breit_wigner_density(e, p));
  const double mass = total_mass(d);
  for (double& v : d.density) v /= mass;
  return d;
}

double survival_from_energy_density(const EnergyDensity& d, double t) {
  const double step = grid_step(d.grid);
  const double mass = total_mass(d);
  if (std::abs(mass - 1.0) > 1e-6) throw ValidationError("energy density is not normalized");
  if (step * std::abs(t) > 0.5) throw ResolutionError("energy grid too coarse for t (step * |t| > 0.5)");
  // Factor out the phase at the grid center so the integrand varies slowly near it.
  const double center = 0.5 * (d.grid.front() + d.grid.back());
  std::vector<std::complex<double>> integrand(d.grid.size());
  for (std::size_t i = 0; i < d.grid.size(); ++i) {
    integrand[i] = d.density[i] * std::polar(1.0, -(d.grid[i] - center) * t);
  }
  return std::norm(quad::simpson<std::complex<double>>(integrand, step));
}

std::complex<double> twf_energy_amplitude(double energy, const BreitWignerParams& p) {
  require_width(p);
  const std::complex<double> pole(p.m, -p.gamma / 2);
  return std::complex<double>(0.0, -std::sqrt(p.gamma / (2.0 * kPi))) / (energy - pole);
}

EnergyAmplitude tabulate_twf_amplitude(const BreitWignerParams& p, const GridSpec& spec) {
  EnergyAmplitude a;
  a.grid = energy_grid(p, spec);
  a.values.reserve(a.grid.size());
  for (double e : a.grid) a.values.push_back(twf_energy_amplitude(e, p));
  return a;
}

std::complex<double> twf_time_amplitude(double t, const BreitWignerParams& p) {
  require_width(p);
  if (t < 0.0) return {0.0, 0.0};
  return std::sqrt(p.gamma) * std::exp(std::complex<double>(-p.gamma / 2 * t, -p.m * t));
}

double twf_survival(double t, const BreitWignerParams& p) {
  require_width(p);
  if (t < 0.0) throw DomainError("negative times are excluded");
  static const quad::GaussLegendre<double> rule(12);
  // |Psi|^2 has decayed by e^{-60} at the far end.
  const double span = 60.0 / p.gamma;
  return rule.integrate([&](double s) { return std::norm(twf_time_amplitude(s, p)); }, t, t + span, 120);
}

EquivalenceReport equivalence_report(const BreitWignerParams& p, const GridSpec& energy, const TimeGridSpec& time) {
  require_width(p);
  if (time.points < 2 || !(time.t_max_times_gamma > 0.0)) throw ResolutionError("time grid needs at least two points");

  EquivalenceReport r;
  const EnergyDensity bw = tabulate_breit_wigner(p, energy);
  const EnergyAmplitude twf = tabulate_twf_amplitude(p, energy);
  const double peak = breit_wigner_density(p.m, p);
  for (std::size_t i = 0; i < bw.grid.size(); ++i) {
    r.max_density_deviation = std::max(r.max_density_deviation, std::abs(std::norm(twf.values[i]) - bw.density[i]) / peak);
  }

  r.times = uniform_grid(0.0, time.t_max_times_gamma / p.gamma, time.points);
  for (double t : r.times) {
    const double exact = std::exp(-p.gamma * t);
    const double standard = survival_from_energy_density(bw, t);
    const double temporal = twf_survival(t, p);
    r.standard_survival.push_back(standard);
    r.twf_survival.push_back(temporal);
    r.max_standard_survival_deviation = std::max(r.max_standard_survival_deviation, std::abs(standard - exact));
    r.max_twf_survival_deviation = std::max(r.max_twf_survival_deviation, std::abs(temporal - exact));
    r.max_survival_deviation = std::max(r.max_survival_deviation, std::abs(standard - temporal));
  }
  return r;
}

std::string curve_csv(const std::string& x_name, const std::vector<double>& x, const std::vector<double>& values) {
  if (x.size() != values.size()) throw GridMismatch("curve columns differ in length");
  std::ostringstream out;
  out << x_name << ",value\n";
  for (std::size_t i = 0; i < x.size(); ++i) out << format_number(x[i]) << ',' << format_number(values[i]) << '\n';
  return out.str();
}

}  // namespace kaonlab::spectral
