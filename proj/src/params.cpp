#include "kaonlab/params.hpp"

#include <numbers>

#include "kaonlab/errors.hpp"

namespace kaonlab {
namespace {

constexpr double kDegree = std::numbers::pi / 180.0;

}  // namespace

void validate(const KaonPhysics& p) {
  auto finite = [](double x) { return std::isfinite(x); };
  if (!finite(p.tau_s) || p.tau_s <= 0.0) throw ValidationError("tau_s must be positive");
  if (!finite(p.tau_l) || p.tau_l < p.tau_s) throw ValidationError("tau_l must not be below tau_s");
  if (!finite(p.delta_m)) throw ValidationError("delta_m must be finite");
  if (!finite(p.epsilon.real()) || !finite(p.epsilon.imag()) || std::abs(p.epsilon) >= 0.1) {
    throw ValidationError("|epsilon| must be below 0.1");
  }
  // Relative slack absorbs the round trip through ratio keys.
  constexpr double slack = 1.0 + 1e-12;
  if (!(p.gamma_k1_to_2pi > 0.0) || p.gamma_k1_to_2pi > p.gamma_s() * slack) {
    throw ValidationError("gamma_k1_to_2pi must lie in (0, Gamma_S]");
  }
  if (!(p.gamma_k2_to_3pi > 0.0) || p.gamma_k2_to_3pi > p.gamma_l() * slack) {
    throw ValidationError("gamma_k2_to_3pi must lie in (0, Gamma_L]");
  }
  if (!(p.gamma_semileptonic > 0.0) || p.gamma_semileptonic > p.gamma_l() * slack) {
    throw ValidationError("gamma_semileptonic must lie in (0, Gamma_L]");
  }
}

KaonPhysics default_physics() { return KaonPhysics{}; }

KaonPhysics with_epsilon(KaonPhysics physics, std::complex<double> epsilon) {
  physics.epsilon = epsilon;
  return physics;
}

const std::vector<std::string>& physics_keys() {
  static const std::vector<std::string> keys = {
      "tau_s_seconds",           "tau_l_seconds",
      "abs_epsilon",             "arg_epsilon_degrees",
      "delta_m_times_tau_s",     "gamma_k1_2pi_over_gamma_s",
      "gamma_k2_3pi_over_gamma_l", "gamma_semileptonic_over_gamma_l"};
  return keys;
}

KaonPhysics load_physics(const KeyValues& doc) {
  const bool fill = doc.empty() || (doc.contains("use_defaults") && doc.get_bool("use_defaults"));
  const KeyValues defaults = to_key_values(default_physics());
  auto number = [&](const std::string& key) {
    if (doc.contains(key) || !fill) return doc.get_double(key);
    return defaults.get_double(key);
  };

  KaonPhysics p;
  p.tau_s = number("tau_s_seconds");
  p.tau_l = number("tau_l_seconds");
  p.epsilon = std::polar(number("abs_epsilon"), number("arg_epsilon_degrees") * kDegree);
  p.delta_m = number("delta_m_times_tau_s") / p.tau_s;
  p.gamma_k1_to_2pi = number("gamma_k1_2pi_over_gamma_s") / p.tau_s;
  p.gamma_k2_to_3pi = number("gamma_k2_3pi_over_gamma_l") / p.tau_l;
  p.gamma_semileptonic = number("gamma_semileptonic_over_gamma_l") / p.tau_l;
  if (p.tau_s <= 0.0) throw ValidationError("tau_s must be positive");
  if (number("abs_epsilon") < 0.0) throw ValidationError("abs_epsilon must be nonnegative");
  validate(p);
  return p;
}

KaonPhysics load_physics(std::istream& in) { return load_physics(KeyValues::parse(in)); }

KeyValues to_key_values(const KaonPhysics& p) {
  KeyValues kv;
  kv.set("tau_s_seconds", format_number(p.tau_s));
  kv.set("tau_l_seconds", format_number(p.tau_l));
  kv.set("abs_epsilon", format_number(std::abs(p.epsilon)));
  kv.set("arg_epsilon_degrees", format_number(std::arg(p.epsilon) / kDegree));
  kv.set("delta_m_times_tau_s", format_number(p.delta_m * p.tau_s));
  kv.set("gamma_k1_2pi_over_gamma_s", format_number(p.gamma_k1_to_2pi * p.tau_s));
  kv.set("gamma_k2_3pi_over_gamma_l", format_number(p.gamma_k2_to_3pi * p.tau_l));
  kv.set("gamma_semileptonic_over_gamma_l", format_number(p.gamma_semileptonic * p.tau_l));
  return kv;
}

}  // namespace kaonlab
