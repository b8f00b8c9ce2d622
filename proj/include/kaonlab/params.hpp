#pragma once

#include <cmath>
#include <numbers>
#include <complex>
#include <istream>
#include <string>
#include <vector>

#include "kaonlab/io.hpp"

namespace kaonlab {

/// Physical constants of the neutral-kaon system, SI units.
///
/// Widths are absolute rates in 1/s. The mass splitting is an angular
/// frequency (hbar = 1).
struct KaonPhysics {
  double tau_s = 8.92e-11;
  double tau_l = 5.17e-8;
  double delta_m = 0.472 / 8.92e-11;
  std::complex<double> epsilon = std::polar(2.228e-3, 43.5 * std::numbers::pi / 180.0);
  double gamma_k1_to_2pi = 1.0 / 8.92e-11;
  double gamma_k2_to_3pi = 0.20 / 5.17e-8;
  double gamma_semileptonic = 0.335 / 5.17e-8;

  double gamma_s() const { return 1.0 / tau_s; }
  double gamma_l() const { return 1.0 / tau_l; }
};

/// Throws ValidationError if an invariant of KaonPhysics is violated.
void validate(const KaonPhysics& physics);

/// Default constants (lifetimes, |eps| and arg eps from the PDG-style compilation,
/// delta_m * tau_s = 0.472, channel widths as fractions of the total widths).
KaonPhysics default_physics();

/// Same constants with epsilon replaced.
KaonPhysics with_epsilon(KaonPhysics physics, std::complex<double> epsilon);

/// Flat keys understood by load_physics.
const std::vector<std::string>& physics_keys();

/// Builds KaonPhysics from a key-value document.
///
/// Every key of physics_keys() must be present unless the document is empty or
/// sets `use_defaults = true`, in which case missing keys take default values.
/// Unknown keys are ignored here so that physics keys can share a file with
/// other sections; callers that own the whole file reject leftovers.
KaonPhysics load_physics(const KeyValues& doc);
KaonPhysics load_physics(std::istream& in);

/// Key-value rendering of the constants, inverse of load_physics.
KeyValues to_key_values(const KaonPhysics& physics);

/// E = mass - (i/2) Gamma in tau_S units, mass relative to m_S.
template <typename Scalar>
struct ComplexEnergyT {
  Scalar mass{};
  Scalar half_width{};

  std::complex<Scalar> value() const { return {mass, -half_width}; }

  /// exp(-i E t) = exp(-Gamma t / 2) (cos(m t) - i sin(m t)).
  std::complex<Scalar> propagator(Scalar t) const {
    using std::cos;
    using std::exp;
    using std::sin;
    const Scalar decay = exp(-half_width * t);
    return {decay * cos(mass * t), -decay * sin(mass * t)};
  }
};

/// Quantities derived from KaonPhysics in tau_S units: every rate is Gamma * tau_S
/// and every time is t / tau_S.
template <typename Scalar>
struct DerivedConstantsT {
  Scalar gamma_s{};
  Scalar gamma_l{};
  Scalar ratio_sl{};
  ComplexEnergyT<Scalar> e_s;
  ComplexEnergyT<Scalar> e_l;
  std::complex<Scalar> epsilon;
  Scalar gamma_k1_to_2pi{};
  Scalar gamma_k2_to_3pi{};
  Scalar gamma_semileptonic{};
  double tau_s_seconds{};

  Scalar delta_m() const { return e_l.mass - e_s.mass; }
  double gamma_s_per_second() const { return static_cast<double>(gamma_s) / tau_s_seconds; }
  double gamma_l_per_second() const { return static_cast<double>(gamma_l) / tau_s_seconds; }

  template <typename Other>
  DerivedConstantsT<Other> cast() const {
    DerivedConstantsT<Other> out;
    out.gamma_s = static_cast<Other>(gamma_s);
    out.gamma_l = static_cast<Other>(gamma_l);
    out.ratio_sl = static_cast<Other>(ratio_sl);
    out.e_s = {static_cast<Other>(e_s.mass), static_cast<Other>(e_s.half_width)};
    out.e_l = {static_cast<Other>(e_l.mass), static_cast<Other>(e_l.half_width)};
    out.epsilon = {static_cast<Other>(epsilon.real()), static_cast<Other>(epsilon.imag())};
    out.gamma_k1_to_2pi = static_cast<Other>(gamma_k1_to_2pi);
    out.gamma_k2_to_3pi = static_cast<Other>(gamma_k2_to_3pi);
    out.gamma_semileptonic = static_cast<Other>(gamma_semileptonic);
    out.tau_s_seconds = tau_s_seconds;
    return out;
  }
};

using ComplexEnergy = ComplexEnergyT<double>;
using DerivedConstants = DerivedConstantsT<double>;

template <typename Scalar = double>
DerivedConstantsT<Scalar> derive(const KaonPhysics& physics) {
  validate(physics);
  const Scalar tau_s = static_cast<Scalar>(physics.tau_s);
  DerivedConstantsT<Scalar> d;
  d.tau_s_seconds = physics.tau_s;
  d.gamma_s = Scalar(1);
  d.gamma_l = tau_s / static_cast<Scalar>(physics.tau_l);
  d.ratio_sl = d.gamma_s / d.gamma_l;
  d.e_s = {Scalar(0), d.gamma_s / 2};
  d.e_l = {static_cast<Scalar>(physics.delta_m) * tau_s, d.gamma_l / 2};
  d.epsilon = {static_cast<Scalar>(physics.epsilon.real()), static_cast<Scalar>(physics.epsilon.imag())};
  d.gamma_k1_to_2pi = static_cast<Scalar>(physics.gamma_k1_to_2pi) * tau_s;
  d.gamma_k2_to_3pi = static_cast<Scalar>(physics.gamma_k2_to_3pi) * tau_s;
  d.gamma_semileptonic = static_cast<Scalar>(physics.gamma_semileptonic) * tau_s;
  return d;
}

}  // namespace kaonlab
