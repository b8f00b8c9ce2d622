#include "kaonlab/golden_rule.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "kaonlab/errors.hpp"
#include "kaonlab/quadrature.hpp"

namespace kaonlab::golden_rule {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::complex<double> kI{0.0, 1.0};

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

void check_grid(const TabulatedFunction& f, const char* what) {
  if (f.x.size() != f.y.size() || f.x.empty()) throw ValidationError(std::string(what) + ": malformed table");
  for (std::size_t i = 1; i < f.x.size(); ++i) {
    if (!(f.x[i] > f.x[i - 1])) throw ValidationError(std::string(what) + ": grid must be strictly increasing");
  }
}

}  // namespace

double TabulatedFunction::at(double where) const {
  if (x.empty() || where < x.front() || where > x.back()) {
    throw ResolutionError("no tabulation at w = " + std::to_string(where));
  }
  if (x.size() == 1) return y.front();
  const auto it = std::upper_bound(x.begin(), x.end(), where);
  const std::size_t hi = std::min<std::size_t>(static_cast<std::size_t>(it - x.begin()), x.size() - 1);
  const std::size_t lo = hi - 1;
  const double frac = (where - x[lo]) / (x[hi] - x[lo]);
  return y[lo] + frac * (y[hi] - y[lo]);
}

int ModeSystem::species_count() const {
  int n = 0;
  for (const auto& c : channels) n = std::max(n, c.species + 1);
  return n;
}

void validate(const ModeSystem& sys) {
  if (!std::isfinite(sys.omega_in)) throw ValidationError("omega_in must be finite");
  for (const auto& c : sys.channels) {
    if (c.species < 0) throw ValidationError("species index must be nonnegative");
    if (!std::isfinite(c.omega) || !std::isfinite(c.coupling.real()) || !std::isfinite(c.coupling.imag())) {
      throw ValidationError("channel frequency and coupling must be finite");
    }
  }
  for (const auto& spec : sys.continua) {
    check_grid(spec.dos, "density of states");
    check_grid(spec.coupling_sq, "|G|^2");
  }
}

Trajectory integrate(const ModeSystem& sys, double t_max, int n_steps, const IntegrateOptions& options) {
  validate(sys);
  if (!(t_max > 0.0)) throw ValidationError("t_max must be positive");
  if (n_steps < 10) throw ValidationError("n_steps must be at least 10");
  if (options.record_stride < 1) throw ValidationError("record_stride must be at least 1");

  const Eigen::Index n = static_cast<Eigen::Index>(sys.channels.size());
  const int n_species = sys.species_count();
  Eigen::ArrayXd detuning(n);
  Eigen::ArrayXcd coupling(n);
  Eigen::ArrayXi species(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto& c = sys.channels[static_cast<std::size_t>(k)];
    detuning(k) = c.omega - sys.omega_in;
    coupling(k) = c.coupling;
    species(k) = c.species;
  }

  std::complex<double> c_in = options.initial_in;
  Eigen::ArrayXcd c_out = Eigen::ArrayXcd::Zero(n);
  if (options.initial_out.size() != 0) {
    if (options.initial_out.size() != n) throw ValidationError("initial_out has the wrong number of channels");
    c_out = options.initial_out.array();
  }
  const double norm0 = std::norm(c_in) + c_out.abs2().sum();

  // phase(t) = exp(-i (w_k - w_in) t)
  auto phases = [&](double t) -> Eigen::ArrayXcd { return (-kI * t * detuning.cast<std::complex<double>>()).exp(); };
  struct Derivative {
    std::complex<double> in;
    Eigen::ArrayXcd out;
  };
  auto rhs = [&](const Eigen::ArrayXcd& phase, std::complex<double> y_in, const Eigen::ArrayXcd& y_out) {
    return Derivative{-kI * (coupling.conjugate() * y_out * phase).sum(), -kI * y_in * coupling * phase.conjugate()};
  };

  Trajectory traj;
  const std::size_t recorded = static_cast<std::size_t>(n_steps / options.record_stride) + 2;
  traj.times.reserve(recorded);
  traj.c_in.reserve(recorded);
  std::vector<Eigen::VectorXd> norms;
  std::vector<Eigen::VectorXcd> outs;
  auto record = [&](double t) {
    traj.times.push_back(t);
    traj.c_in.push_back(c_in);
    Eigen::VectorXd s = Eigen::VectorXd::Zero(n_species);
    const Eigen::ArrayXd a2 = c_out.abs2();
    for (Eigen::Index k = 0; k < n; ++k) s(species(k)) += a2(k);
    norms.push_back(std::move(s));
    if (options.record_channels) outs.emplace_back(c_out.matrix());
  };

  const double h = t_max / n_steps;
  record(0.0);
  for (int step = 0; step < n_steps; ++step) {
    const double t = h * step;
    const Eigen::ArrayXcd p0 = phases(t);
    const Eigen::ArrayXcd p_half = phases(t + h / 2);
    const Eigen::ArrayXcd p1 = phases(t + h);

    const Derivative k1 = rhs(p0, c_in, c_out);
    const Derivative k2 = rhs(p_half, c_in + (h / 2) * k1.in, c_out + (h / 2) * k1.out);
    const Derivative k3 = rhs(p_half, c_in + (h / 2) * k2.in, c_out + (h / 2) * k2.out);
    const Derivative k4 = rhs(p1, c_in + h * k3.in, c_out + h * k3.out);
    c_in += (h / 6) * (k1.in + 2.0 * k2.in + 2.0 * k3.in + k4.in);
    c_out += (h / 6) * (k1.out + 2.0 * k2.out + 2.0 * k3.out + k4.out);

    const double drift = std::abs(std::norm(c_in) + c_out.abs2().sum() - norm0);
    traj.max_norm_drift = std::max(traj.max_norm_drift, drift);
    if (drift > options.norm_tolerance) {
      throw IntegratorFailure("norm drift " + std::to_string(drift) + " at t = " + std::to_string(t + h) +
                              "; reduce the step size");
    }
    if ((step + 1) % options.record_stride == 0 || step + 1 == n_steps) record(h * (step + 1));
  }

  traj.species_norm.resize(static_cast<Eigen::Index>(norms.size()), n_species);
  for (std::size_t r = 0; r < norms.size(); ++r) traj.species_norm.row(static_cast<Eigen::Index>(r)) = norms[r];
  if (options.record_channels) {
    traj.c_out.resize(static_cast<Eigen::Index>(outs.size()), n);
    for (std::size_t r = 0; r < outs.size(); ++r) traj.c_out.row(static_cast<Eigen::Index>(r)) = outs[r];
  }
  return traj;
}

double perturbative_occupation(double coupling_mag, double detuning, double t) {
  if (t < 0.0) throw DomainError("time must be nonnegative");
  const double s = sinc(detuning * t / 2);
  return coupling_mag * coupling_mag * t * t * s * s;
}

GammaBreakdown golden_rule_gamma(std::span<const ContinuumSpec> continua, double omega_in) {
  GammaBreakdown out;
  for (const auto& spec : continua) {
    if (spec.species < 0) throw ValidationError("species index must be nonnegative");
    const auto s = static_cast<std::size_t>(spec.species);
    if (out.per_species.size() <= s) out.per_species.resize(s + 1, 0.0);
    out.per_species[s] += kTwoPi * spec.dos.at(omega_in) * spec.coupling_sq.at(omega_in);
  }
  for (double g : out.per_species) out.total += g;
  return out;
}

EffectiveMode effective_mode(const ModeSystem& sys, double omega, double tolerance) {
  EffectiveMode mode;
  std::vector<std::complex<double>> g;
  for (std::size_t k = 0; k < sys.channels.size(); ++k) {
    if (std::abs(sys.channels[k].omega - omega) <= tolerance) {
      mode.channel_indices.push_back(static_cast<int>(k));
      g.push_back(sys.channels[k].coupling);
    }
  }
  if (g.empty()) throw EmptySector("no outgoing channel at w = " + std::to_string(omega));
  mode.weights = Eigen::Map<const Eigen::VectorXcd>(g.data(), static_cast<Eigen::Index>(g.size()));
  mode.g_eff = mode.weights.norm();
  if (mode.g_eff == 0.0) throw EmptySector("all channels at w = " + std::to_string(omega) + " are uncoupled");
  mode.weights /= mode.g_eff;
  return mode;
}

double sinc_delta_check(double t, double half_width) {
  if (!(t > 0.0)) throw DomainError("t must be positive");
  if (!(half_width > 0.0)) throw ValidationError("window half-width must be positive");
  // Beyond the window sinc^2(x t/2) <= 4 / (x t)^2, so the neglected part of
  // t * integral is at most 8 / (t * half_width).
  const double tail_bound = 8.0 / (t * half_width);
  if (tail_bound > 0.01 * kTwoPi) {
    throw ResolutionError("window too small: neglected tail may exceed 1% (t * half_width must be >= " +
                          std::to_string(8.0 / (0.01 * kTwoPi)) + ")");
  }
  static const quad::GaussLegendre<double> rule(10);
  // about 8 panels per oscillation period 4 pi / t
  const int panels = std::max(64, static_cast<int>(std::ceil(2.0 * half_width * t / (4.0 * std::numbers::pi) * 8.0)));
  const double integral = rule.integrate(
      [t](double x) {
        const double s = sinc(x * t / 2);
        return s * s;
      },
      -half_width, half_width, panels);
  return t * integral;
}

ModeSystem flat_continuum(std::span<const double> species_gammas, double omega_in, double spacing,
                          double bandwidth) {
  if (!(spacing > 0.0) || !(bandwidth > spacing)) throw ValidationError("need 0 < spacing < bandwidth");
  const int modes = static_cast<int>(std::lround(bandwidth / spacing));
  ModeSystem sys;
  sys.omega_in = omega_in;
  sys.channels.reserve(species_gammas.size() * static_cast<std::size_t>(modes));
  const double rho = 1.0 / spacing;
  const double lo = omega_in - spacing * (modes - 1) / 2.0;
  const double hi = omega_in + spacing * (modes - 1) / 2.0;
  for (std::size_t s = 0; s < species_gammas.size(); ++s) {
    const double gamma = species_gammas[s];
    if (!(gamma > 0.0)) throw ValidationError("species width must be positive");
    const double g2 = gamma / (kTwoPi * rho);
    const double g = std::sqrt(g2);
    for (int k = 0; k < modes; ++k) {
      sys.channels.push_back({static_cast<int>(s), 0, lo + spacing * k, {g, 0.0}});
    }
    sys.continua.push_back({static_cast<int>(s), 0, {{lo, hi}, {rho, rho}}, {{lo, hi}, {g2, g2}}});
  }
  return sys;
}

double fit_decay_constant(const Trajectory& traj, double t_lo, double t_hi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0;
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const double t = traj.times[i];
    if (t < t_lo || t > t_hi) continue;
    const double y = std::log(std::norm(traj.c_in[i]));
    sx += t;
    sy += y;
    sxx += t * t;
    sxy += t * y;
    ++count;
  }
  if (count < 2) throw ResolutionError("fewer than two recorded samples in the fit window");
  const double denom = count * sxx - sx * sx;
  return -(count * sxy - sx * sy) / denom;
}

std::vector<double> branching_fractions(const Trajectory& traj) {
  if (traj.species_norm.rows() == 0) throw ResolutionError("empty trajectory");
  const Eigen::VectorXd last = traj.species_norm.row(traj.species_norm.rows() - 1).transpose();
  const double total = last.sum();
  if (!(total > 0.0)) throw ResolutionError("no outgoing population");
  std::vector<double> out(static_cast<std::size_t>(last.size()));
  for (Eigen::Index s = 0; s < last.size(); ++s) out[static_cast<std::size_t>(s)] = last(s) / total;
  return out;
}

double Scenario::total_gamma() const {
  double sum = 0.0;
  for (double g : species_gammas) sum += g;
  return sum;
}

Scenario Scenario::from_key_values(const KeyValues& kv) {
  Scenario s;
  const long long count = kv.get_int("species");
  if (count < 1) throw ConfigError("species", "must be at least 1");
  std::vector<std::string> allowed = {"species", "spacing_over_gamma", "bandwidth_over_gamma", "t_max_times_gamma"};
  s.species_gammas.clear();
  for (long long i = 1; i <= count; ++i) {
    const std::string key = "gamma_" + std::to_string(i);
    allowed.push_back(key);
    const double g = kv.get_double(key);
    if (!(g > 0.0)) throw ConfigError(key, "must be positive");
    s.species_gammas.push_back(g);
  }
  kv.reject_unknown(allowed);
  s.spacing_over_gamma = kv.get_double("spacing_over_gamma", s.spacing_over_gamma);
  s.bandwidth_over_gamma = kv.get_double("bandwidth_over_gamma", s.bandwidth_over_gamma);
  s.t_max_times_gamma = kv.get_double("t_max_times_gamma", s.t_max_times_gamma);
  if (!(s.spacing_over_gamma > 0.0)) throw ConfigError("spacing_over_gamma", "must be positive");
  if (!(s.bandwidth_over_gamma > s.spacing_over_gamma)) {
    throw ConfigError("bandwidth_over_gamma", "must exceed spacing_over_gamma");
  }
  if (!(s.t_max_times_gamma > 3.0)) throw ConfigError("t_max_times_gamma", "must exceed the fit window end (3)");
  return s;
}

KeyValues Scenario::to_key_values() const {
  KeyValues kv;
  kv.set("species", std::to_string(species_gammas.size()));
  for (std::size_t i = 0; i < species_gammas.size(); ++i) {
    kv.set("gamma_" + std::to_string(i + 1), format_number(species_gammas[i]));
  }
  kv.set("spacing_over_gamma", format_number(spacing_over_gamma));
  kv.set("bandwidth_over_gamma", format_number(bandwidth_over_gamma));
  kv.set("t_max_times_gamma", format_number(t_max_times_gamma));
  return kv;
}

ScenarioResult run_scenario(const Scenario& scenario) {
  const double gamma = scenario.total_gamma();
  const double spacing = scenario.spacing_over_gamma * gamma;
  const double bandwidth = scenario.bandwidth_over_gamma * gamma;
  const ModeSystem sys = flat_continuum(scenario.species_gammas, 0.0, spacing, bandwidth);

  const double t_max = scenario.t_max_times_gamma / gamma;
  const double max_step = std::min(kTwoPi / bandwidth, 1.0 / gamma) / 40.0;
  ScenarioResult out;
  out.n_steps = std::max(10, static_cast<int>(std::ceil(t_max / max_step)));

  IntegrateOptions options;
  options.record_channels = false;
  out.trajectory = integrate(sys, t_max, out.n_steps, options);
  out.predicted = golden_rule_gamma(sys.continua, sys.omega_in);
  out.fitted_gamma = fit_decay_constant(out.trajectory, 0.5 / gamma, 3.0 / gamma);
  out.branching = branching_fractions(out.trajectory);
  return out;
}

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream out;
  out << "t,re_c_in,im_c_in";
  for (Eigen::Index s = 0; s < traj.species_norm.cols(); ++s) out << ",norm_out_species_" << (s + 1);
  out << '\n';
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    out << format_number(traj.times[i]) << ',' << format_number(traj.c_in[i].real()) << ','
        << format_number(traj.c_in[i].imag());
    for (Eigen::Index s = 0; s < traj.species_norm.cols(); ++s) {
      out << ',' << format_number(traj.species_norm(static_cast<Eigen::Index>(i), s));
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace kaonlab::golden_rule
