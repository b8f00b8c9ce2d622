#pragma once

#include <complex>
#include <string_view>

#include <Eigen/Dense>

#include "kaonlab/errors.hpp"
#include "kaonlab/params.hpp"
#include "kaonlab/types.hpp"
#include "kaonlab/wwa.hpp"

/// Binary temporal wave function (T.W.F.) model.
///
/// The decay-time amplitude is a pseudo-spinor (Psi_+, Psi_-) over the CP = +1
/// and CP = -1 sectors. A short-lived piece sqrt(Gamma_S) e^{-iE_S t}(1, eps_s)
/// and a long-lived piece sqrt(Gamma_L) e^{-iE_L t}(eps_l, 1) are superposed with
/// preparation coefficients (alpha, beta). |Psi_+|^2 dt is the probability of a
/// CP-even decay in [t, t+dt].
namespace kaonlab::twf {

/// How eps_s is tied to the measured eps. eps_l = eps sqrt(Gamma_S/Gamma_L) in both.
enum class Variant {
  MatchedLargeT,     ///< eps_s = eps: large-t asymmetry agrees with WWA.
  MatchedThreePion,  ///< eps_s = eps sqrt(Gamma_L/Gamma_S): K_S -> 3pi rate agrees with WWA.
};

std::string_view to_string(Variant v);
Variant parse_variant(std::string_view name);

template <typename Scalar>
struct ParamsT {
  std::complex<Scalar> eps_s_tilde;
  std::complex<Scalar> eps_l_tilde;
};
using Params = ParamsT<double>;

template <typename Scalar>
void validate(const ParamsT<Scalar>& p) {
  if (!(std::abs(p.eps_s_tilde) < Scalar(1))) throw ValidationError("|eps_s_tilde| must be below 1");
  if (!(std::abs(p.eps_s_tilde * p.eps_l_tilde) < Scalar(1))) {
    throw ValidationError("|eps_s_tilde * eps_l_tilde| must be below 1");
  }
}

template <typename Scalar>
ParamsT<Scalar> constrain(const DerivedConstantsT<Scalar>& d, Variant variant) {
  using std::sqrt;
  ParamsT<Scalar> p;
  p.eps_l_tilde = d.epsilon * sqrt(d.gamma_s / d.gamma_l);
  p.eps_s_tilde = variant == Variant::MatchedLargeT ? d.epsilon : d.epsilon * sqrt(d.gamma_l / d.gamma_s);
  return p;
}

inline Params constrain(const KaonPhysics& physics, Variant variant) {
  return constrain(derive(physics), variant);
}

template <typename Scalar>
struct PreparationT {
  std::complex<Scalar> alpha;
  std::complex<Scalar> beta;
};
using Preparation = PreparationT<double>;

/// Decomposes the prepared state on the un-normalized pseudo-spinors (1, eps_s)
/// and (eps_l, 1). K0 = (1,1)/sqrt(2) gives
/// alpha = (1-eps_l) / (sqrt(2)(1 - eps_s eps_l)), beta = (1-eps_s) / (sqrt(2)(1 - eps_s eps_l)).
/// KS and KL use the normalized pseudo-spinors.
template <typename Scalar>
PreparationT<Scalar> prepare(Flavor initial, const ParamsT<Scalar>& p) {
  using C = std::complex<Scalar>;
  using std::sqrt;
  const C det = C(1) - p.eps_s_tilde * p.eps_l_tilde;
  if (det == C(0)) throw SingularPreparation("eps_s_tilde * eps_l_tilde == 1");
  switch (initial) {
    case Flavor::KS: return {C(Scalar(1) / sqrt(Scalar(1) + std::norm(p.eps_s_tilde))), C(0)};
    case Flavor::KL: return {C(0), C(Scalar(1) / sqrt(Scalar(1) + std::norm(p.eps_l_tilde)))};
    default: break;
  }
  // Columns (1, eps_s) and (eps_l, 1); inverse is [[1, -eps_l], [-eps_s, 1]] / det.
  const wwa::Vector2c<Scalar> target = wwa::cp_state(initial, C(0));
  return {(target(0) - p.eps_l_tilde * target(1)) / det, (target(1) - p.eps_s_tilde * target(0)) / det};
}

template <typename Scalar>
struct TwoComponentAmplitudeT {
  std::complex<Scalar> plus;
  std::complex<Scalar> minus;
};
using TwoComponentAmplitude = TwoComponentAmplitudeT<double>;

/// (alpha sqrt(G_S) e_S + beta eps_l sqrt(G_L) e_L,  beta sqrt(G_L) e_L + alpha eps_s sqrt(G_S) e_S)
template <typename Scalar>
TwoComponentAmplitudeT<Scalar> amplitude(const PreparationT<Scalar>& prep, const ParamsT<Scalar>& p, Scalar t,
                                         const DerivedConstantsT<Scalar>& d) {
  using std::sqrt;
  wwa::require_nonnegative_time(static_cast<double>(t));
  const std::complex<Scalar> short_part = sqrt(d.gamma_s) * d.e_s.propagator(t);
  const std::complex<Scalar> long_part = sqrt(d.gamma_l) * d.e_l.propagator(t);
  return {prep.alpha * short_part + prep.beta * p.eps_l_tilde * long_part,
          prep.beta * long_part + prep.alpha * p.eps_s_tilde * short_part};
}

inline bool cp_conserving(const Params& p) { return p.eps_s_tilde == 0.0 && p.eps_l_tilde == 0.0; }

/// Rate divided by the channel width.
///
/// Pions: |Psi_+|^2 / Gamma_S and |Psi_-|^2 / Gamma_L. Leptons (CP-conserving
/// parameters only): |Psi_+/sqrt(G_S) +- Psi_-/sqrt(G_L)|^2 / 2.
template <typename Scalar>
Scalar channel_weight(Channel channel, Flavor initial, Scalar t, const DerivedConstantsT<Scalar>& d,
                      const ParamsT<Scalar>& p) {
  using std::sqrt;
  if ((channel == Channel::SemileptonicPlus || channel == Channel::SemileptonicMinus) &&
      !(p.eps_s_tilde == std::complex<Scalar>(0) && p.eps_l_tilde == std::complex<Scalar>(0))) {
    throw UnsupportedRegime("T.W.F. semileptonic rates are defined only for eps_s_tilde = eps_l_tilde = 0");
  }
  const auto psi = amplitude(prepare(initial, p), p, t, d);
  switch (channel) {
    case Channel::TwoPion: return std::norm(psi.plus) / d.gamma_s;
    case Channel::ThreePion: return std::norm(psi.minus) / d.gamma_l;
    case Channel::SemileptonicPlus: return std::norm(psi.plus / sqrt(d.gamma_s) + psi.minus / sqrt(d.gamma_l)) / Scalar(2);
    case Channel::SemileptonicMinus: return std::norm(psi.plus / sqrt(d.gamma_s) - psi.minus / sqrt(d.gamma_l)) / Scalar(2);
  }
  return Scalar(0);
}

template <typename Scalar>
Scalar rate(Channel channel, Flavor initial, Scalar t, const DerivedConstantsT<Scalar>& d, const ParamsT<Scalar>& p) {
  return wwa::channel_width(channel, d) * channel_weight(channel, initial, t, d, p);
}

template <typename Scalar>
Scalar two_pion_rate(Flavor initial, Scalar t, const DerivedConstantsT<Scalar>& d, const ParamsT<Scalar>& p) {
  return rate(Channel::TwoPion, initial, t, d, p);
}

template <typename Scalar>
Scalar three_pion_rate(Flavor initial, Scalar t, const DerivedConstantsT<Scalar>& d, const ParamsT<Scalar>& p) {
  return rate(Channel::ThreePion, initial, t, d, p);
}

template <typename Scalar>
Scalar semileptonic_rate(Flavor initial, LeptonSign sign, Scalar t, const DerivedConstantsT<Scalar>& d,
                         const ParamsT<Scalar>& p) {
  return rate(semileptonic_channel(sign), initial, t, d, p);
}

}  // namespace kaonlab::twf
