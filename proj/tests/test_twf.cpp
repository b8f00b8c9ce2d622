#include <doctest.h>

#include <numbers>
#include <random>

#include "kaonlab/errors.hpp"
#include "kaonlab/model.hpp"
#include "kaonlab/quadrature.hpp"
#include "kaonlab/twf.hpp"
#include "kaonlab/wwa.hpp"
#include "support.hpp"

using namespace kaonlab;
using C = std::complex<double>;

namespace {

const DerivedConstants kDefaults = derive(default_physics());
const twf::Params kLargeT = twf::constrain(kDefaults, twf::Variant::MatchedLargeT);
const twf::Params kThreePion = twf::constrain(kDefaults, twf::Variant::MatchedThreePion);
const twf::Params kZero{C(0), C(0)};

}  // namespace

TEST_CASE("constraints tie eps_l to eps through the lifetime ratio") {
  CHECK(std::abs(kLargeT.eps_l_tilde) == doctest::Approx(0.053638673719487605).epsilon(1e-13));
  CHECK(std::abs(kThreePion.eps_l_tilde) == doctest::Approx(0.053638673719487605).epsilon(1e-13));
  CHECK(std::arg(kLargeT.eps_l_tilde) == doctest::Approx(std::arg(kDefaults.epsilon)).epsilon(1e-14));
  CHECK(kLargeT.eps_s_tilde == kDefaults.epsilon);
  CHECK(std::abs(kThreePion.eps_s_tilde) == doctest::Approx(2.228e-3 / std::sqrt(579.59641255605381)).epsilon(1e-13));
  const auto zero = twf::constrain(with_epsilon(default_physics(), 0.0), twf::Variant::MatchedThreePion);
  CHECK(twf::cp_conserving(zero));
}

TEST_CASE("CP-conserving preparation is an equal split") {
  const double h = 1.0 / std::sqrt(2.0);
  const auto k0 = twf::prepare(Flavor::K0, kZero);
  const auto k0bar = twf::prepare(Flavor::K0bar, kZero);
  CHECK(test::complex_close(k0.alpha, h, 1e-16));
  CHECK(test::complex_close(k0.beta, h, 1e-16));
  CHECK(test::complex_close(k0bar.alpha, h, 1e-16));
  CHECK(test::complex_close(k0bar.beta, -h, 1e-16));
}

TEST_CASE("K0 preparation with default constraints matches the oracle") {
  const auto prep = twf::prepare(Flavor::K0, kLargeT);
  CHECK(test::complex_close(prep.alpha, C(0.67960194299069685, -0.02602715507499223), 1e-15));
  CHECK(test::complex_close(prep.beta, C(0.70596853666264497, -0.0010002108618300054), 1e-15));
}

TEST_CASE("singular preparation") {
  const twf::Params p{C(0.5), C(2.0)};
  CHECK_THROWS_AS(twf::prepare(Flavor::K0, p), SingularPreparation);
}

TEST_CASE("amplitude components") {
  SUBCASE("CP-conserving: each sector carries one exponential") {
    const twf::Preparation prep{C(0.3, 0.1), C(-0.2, 0.4)};
    for (double t : {0.0, 1.3, 7.0}) {
      const auto psi = twf::amplitude(prep, kZero, t, kDefaults);
      CHECK(test::complex_close(psi.plus, prep.alpha * kDefaults.e_s.propagator(t), 1e-16));
      CHECK(test::complex_close(psi.minus, prep.beta * std::sqrt(kDefaults.gamma_l) * kDefaults.e_l.propagator(t), 1e-16));
    }
  }
  SUBCASE("K_S-like preparation at t = 0") {
    const auto prep = twf::prepare(Flavor::KS, kLargeT);
    const auto psi = twf::amplitude(prep, kLargeT, 0.0, kDefaults);
    const double n = std::sqrt(1.0 + std::norm(kLargeT.eps_s_tilde));
    CHECK(test::complex_close(psi.plus, 1.0 / n, 1e-16));
    CHECK(test::complex_close(psi.minus, kLargeT.eps_s_tilde / n, 1e-16));
  }
  SUBCASE("K0 at t = 3 matches the oracle") {
    const auto psi = twf::amplitude(twf::prepare(Flavor::K0, kLargeT), kLargeT, 3.0, kDefaults);
    CHECK(test::complex_close(psi.plus, C(0.15288078784884291, -0.0067670876876046597), 1e-15));
    CHECK(test::complex_close(psi.minus, C(0.0047224816374548751, -0.028681649752132046), 1e-15));
  }
  CHECK_THROWS_AS(twf::amplitude(twf::prepare(Flavor::K0, kLargeT), kLargeT, -0.1, kDefaults), DomainError);
}

TEST_CASE("two-pion rates") {
  for (double t : {0.0, 0.4, 2.0, 9.0}) {
    CHECK(twf::two_pion_rate(Flavor::K0, t, kDefaults, kZero) ==
          doctest::Approx(kDefaults.gamma_k1_to_2pi / 2 * std::exp(-t)).epsilon(1e-13));
    const double ks = twf::two_pion_rate(Flavor::KS, t, kDefaults, kLargeT);
    CHECK(ks == doctest::Approx(kDefaults.gamma_k1_to_2pi / (1.0 + std::norm(kLargeT.eps_s_tilde)) * std::exp(-t))
                    .epsilon(1e-13));
    const double el2 = std::norm(kLargeT.eps_l_tilde);
    const double kl = twf::two_pion_rate(Flavor::KL, t, kDefaults, kLargeT);
    CHECK(kl == doctest::Approx(kDefaults.gamma_k1_to_2pi * el2 / (1.0 + el2) * kDefaults.gamma_l *
                                std::exp(-kDefaults.gamma_l * t))
                    .epsilon(1e-13));
  }
}

TEST_CASE("three-pion rates") {
  for (double t : {0.0, 1.0, 30.0}) {
    CHECK(twf::three_pion_rate(Flavor::K0, t, kDefaults, kZero) ==
          doctest::Approx(kDefaults.gamma_k2_to_3pi / 2 * std::exp(-kDefaults.gamma_l * t)).epsilon(1e-13));
    const double es2 = std::norm(kThreePion.eps_s_tilde);
    CHECK(twf::three_pion_rate(Flavor::KS, t, kDefaults, kThreePion) ==
          doctest::Approx(kDefaults.gamma_k2_to_3pi / kDefaults.gamma_l * es2 / (1.0 + es2) * std::exp(-t)).epsilon(1e-13));
  }
  CHECK(twf::three_pion_rate(Flavor::K0bar, 1.0, kDefaults, kLargeT) ==
        doctest::Approx(1.6947976481558648e-4).epsilon(1e-12));
}

TEST_CASE("semileptonic rates require CP-conserving parameters") {
  CHECK(twf::semileptonic_rate(Flavor::K0, LeptonSign::Plus, 0.0, kDefaults, kZero) ==
        doctest::Approx(kDefaults.gamma_semileptonic).epsilon(1e-14));
  CHECK(twf::semileptonic_rate(Flavor::K0, LeptonSign::Minus, 0.0, kDefaults, kZero) < 1e-30);
  CHECK_THROWS_AS(twf::semileptonic_rate(Flavor::K0, LeptonSign::Plus, 1.0, kDefaults, kLargeT), UnsupportedRegime);
  const DecayModel m(Model::twf(twf::Variant::MatchedLargeT), default_physics());
  CHECK_THROWS_AS(m.rate(Channel::SemileptonicMinus, Flavor::K0, 1.0), UnsupportedRegime);

  const auto d0 = derive(with_epsilon(default_physics(), 0.0));
  const double t_half = std::numbers::pi / d0.delta_m();
  CHECK(twf::semileptonic_rate(Flavor::K0, LeptonSign::Plus, t_half, d0, kZero) ==
        doctest::Approx(1.3272731104717684e-4).epsilon(1e-12));
  CHECK(twf::semileptonic_rate(Flavor::K0, LeptonSign::Minus, t_half, d0, kZero) ==
        doctest::Approx(1.5333890263194441e-4).epsilon(1e-12));
}

TEST_CASE("reduction to WWA when every CP-violating parameter vanishes") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const auto d = derive(with_epsilon(test::random_physics(rng), 0.0));
    for (int i = 0; i <= 40; ++i) {
      const double t = 0.5 * i;
      for (Flavor f : {Flavor::K0, Flavor::K0bar}) {
        for (Channel ch : kAllChannels) {
          const double a = twf::rate(ch, f, t, d, kZero);
          const double b = wwa::rate(ch, f, t, d);
          CHECK(std::abs(a - b) <= 1e-12 * std::abs(b) + 1e-30);
        }
      }
    }
  }
}

TEST_CASE("the models diverge at t = 0 with default constants") {
  const double twf_rate = twf::two_pion_rate(Flavor::K0, 0.0, kDefaults, kLargeT);
  const double wwa_rate = wwa::two_pion_rate(Flavor::K0, 0.0, kDefaults);
  CHECK(std::abs(twf_rate - wwa_rate) > 0.05 * kDefaults.gamma_k1_to_2pi / 2);
}

TEST_CASE("K_S-like probability budget integrates to one") {
  const quad::GaussLegendre<double> gl(20);
  for (const auto& p : {kLargeT, kThreePion, kZero}) {
    const auto prep = twf::prepare(Flavor::KS, p);
    auto density = [&](double t) {
      const auto psi = twf::amplitude(prep, p, t, kDefaults);
      return std::norm(psi.plus) + std::norm(psi.minus);
    };
    const double total = gl.integrate(density, 0.0, 60.0, 60);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("pion rates are nonnegative for random constants") {
  std::mt19937_64 rng(23);
  std::exponential_distribution<double> time(0.05);
  for (int i = 0; i < 200; ++i) {
    const auto d = derive(test::random_physics(rng));
    for (auto v : {twf::Variant::MatchedLargeT, twf::Variant::MatchedThreePion}) {
      const auto p = twf::constrain(d, v);
      const double t = time(rng);
      for (Flavor f : {Flavor::K0, Flavor::K0bar, Flavor::KS, Flavor::KL}) {
        CHECK(twf::two_pion_rate(f, t, d, p) >= 0.0);
        CHECK(twf::three_pion_rate(f, t, d, p) >= 0.0);
      }
    }
  }
}

TEST_CASE("variant names") {
  CHECK(twf::to_string(twf::Variant::MatchedThreePion) == "matched_three_pion");
  CHECK(twf::parse_variant("matched_large_t") == twf::Variant::MatchedLargeT);
  CHECK_THROWS_AS(twf::parse_variant("large"), ConfigError);
}
