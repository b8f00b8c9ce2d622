#pragma once

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "kaonlab/errors.hpp"
#include "kaonlab/params.hpp"
#include "kaonlab/types.hpp"

/// Weisskopf-Wigner evolution of a single neutral kaon.
///
/// States are two-component complex vectors. The library works in two bases:
/// the CP basis (K1, K2), which is orthonormal, and the eigenbasis (K_S, K_L) of
/// the effective Hamiltonian, in which evolution is diagonal. Times are in units
/// of tau_S and rates in units of 1/tau_S.
namespace kaonlab::wwa {

template <typename Scalar>
using Vector2c = Eigen::Matrix<std::complex<Scalar>, 2, 1>;
template <typename Scalar>
using Matrix2c = Eigen::Matrix<std::complex<Scalar>, 2, 2>;

template <typename Scalar>
std::pair<ComplexEnergyT<Scalar>, ComplexEnergyT<Scalar>> complex_energies(const DerivedConstantsT<Scalar>& d) {
  return {d.e_s, d.e_l};
}

/// Columns are |K_S> = (1, eps)/n and |K_L> = (eps, 1)/n in the CP basis.
template <typename Scalar>
Matrix2c<Scalar> eigen_basis(const std::complex<Scalar>& eps) {
  using std::sqrt;
  const Scalar n = sqrt(Scalar(1) + std::norm(eps));
  Matrix2c<Scalar> b;
  b << std::complex<Scalar>(1) / n, eps / n,
       eps / n, std::complex<Scalar>(1) / n;
  return b;
}

/// CP-basis components of a prepared state.
template <typename Scalar>
Vector2c<Scalar> cp_state(Flavor f, const std::complex<Scalar>& eps) {
  using C = std::complex<Scalar>;
  using std::sqrt;
  const Scalar h = Scalar(1) / sqrt(Scalar(2));
  switch (f) {
    case Flavor::K0: return Vector2c<Scalar>(C(h), C(h));
    case Flavor::K0bar: return Vector2c<Scalar>(C(h), C(-h));
    case Flavor::K1: return Vector2c<Scalar>(C(1), C(0));
    case Flavor::K2: return Vector2c<Scalar>(C(0), C(1));
    case Flavor::KS: return eigen_basis(eps).col(0);
    case Flavor::KL: return eigen_basis(eps).col(1);
  }
  return Vector2c<Scalar>::Zero();
}

/// Expansion coefficients (a_S, a_L) of the prepared state on |K_S>, |K_L>.
///
/// For K0 this is N(1, 1) with N = sqrt(1+|eps|^2) / (sqrt(2)(1+eps)); for K0bar
/// N(1, -1) with (1-eps) in the denominator.
template <typename Scalar>
Vector2c<Scalar> prepare(Flavor f, const std::complex<Scalar>& eps) {
  switch (f) {
    case Flavor::KS: return Vector2c<Scalar>(1, 0);
    case Flavor::KL: return Vector2c<Scalar>(0, 1);
    default: break;
  }
  const Matrix2c<Scalar> b = eigen_basis(eps);
  if (std::abs(b.determinant()) == Scalar(0)) throw SingularPreparation("K_S and K_L are parallel (eps^2 = 1)");
  return b.partialPivLu().solve(cp_state(f, eps));
}

inline void require_nonnegative_time(double t) {
  if (!(t >= 0.0)) throw DomainError("time must be nonnegative");
}

/// Eigenbasis amplitudes (c_S(t), c_L(t)) of a state prepared at t = 0.
template <typename Scalar>
Vector2c<Scalar> evolve_flavor(Flavor initial, Scalar t, const DerivedConstantsT<Scalar>& d) {
  require_nonnegative_time(static_cast<double>(t));
  Vector2c<Scalar> c = prepare(initial, d.epsilon);
  c(0) *= d.e_s.propagator(t);
  c(1) *= d.e_l.propagator(t);
  return c;
}

/// CP-basis amplitudes (a_1(t), a_2(t)).
template <typename Scalar>
Vector2c<Scalar> cp_amplitudes(Flavor initial, Scalar t, const DerivedConstantsT<Scalar>& d) {
  return eigen_basis(d.epsilon) * evolve_flavor(initial, t, d);
}

/// Rate divided by the channel width: the squared projection of the state on the
/// CP eigenstate (pions) or flavor eigenstate (lepton charge) that feeds it.
template <typename Scalar>
Scalar channel_weight(Channel channel, Flavor initial, Scalar t, const DerivedConstantsT<Scalar>& d) {
  const Vector2c<Scalar> a = cp_amplitudes(initial, t, d);
  switch (channel) {
    case Channel::TwoPion: return std::norm(a(0));
    case Channel::ThreePion: return std::norm(a(1));
    // <K0|psi> = (a1 + a2)/sqrt(2), <K0bar|psi> = (a1 - a2)/sqrt(2)
    case Channel::SemileptonicPlus: return std::norm(a(0) + a(1)) / Scalar(2);
    case Channel::SemileptonicMinus: return std::norm(a(0) - a(1)) / Scalar(2);
  }
  return Scalar(0);
}

template <typename Scalar>
Scalar channel_width(Channel channel, const DerivedConstantsT<Scalar>& d) {
  switch (channel) {
    case Channel::TwoPion: return d.gamma_k1_to_2pi;
    case Channel::ThreePion: return d.gamma_k2_to_3pi;
    case Channel::SemileptonicPlus:
    case Channel::SemileptonicMinus: return d.gamma_semileptonic;
  }
  return Scalar(0);
}

template <typename Scalar>
Scalar rate(Channel channel, Flavor initial, Scalar t, const DerivedConstantsT<Scalar>& d) {
  return channel_width(channel, d) * channel_weight(channel, initial, t, d);
}

/// Gamma_{K1->pipi} / (2|1 +- eps|^2) |e^{-iE_S t} +- eps e^{-iE_L t}|^2 for K0 / K0bar.
template <typename Scalar>
Scalar two_pion_rate(Flavor initial, Scalar t, const DerivedConstantsT<Scalar>& d) {
  return rate(Channel::TwoPion, initial, t, d);
}

template <typename Scalar>
Scalar three_pion_rate(Flavor initial, Scalar t, const DerivedConstantsT<Scalar>& d) {
  return rate(Channel::ThreePion, initial, t, d);
}

template <typename Scalar>
Scalar semileptonic_rate(Flavor initial, LeptonSign sign, Scalar t, const DerivedConstantsT<Scalar>& d) {
  return rate(semileptonic_channel(sign), initial, t, d);
}

}  // namespace kaonlab::wwa

namespace kaonlab {

/// Sampled production rate of one channel.
struct RateCurve {
  std::vector<double> times;
  std::vector<double> rates;
  Channel channel = Channel::TwoPion;
};

}  // namespace kaonlab
