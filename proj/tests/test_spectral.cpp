#include <doctest.h>

#include <numbers>

#include "kaonlab/errors.hpp"
#include "kaonlab/grid.hpp"
#include "kaonlab/spectral.hpp"

using namespace kaonlab;
using namespace kaonlab::spectral;

namespace {

constexpr double kPi = std::numbers::pi;

// Raw Lorentzian on [m - w, m + w] without renormalization.
EnergyDensity raw_density(const BreitWignerParams& p, double half_width_over_gamma, double points_per_gamma) {
  EnergyDensity d;
  const int n = static_cast<int>(2.0 * half_width_over_gamma * points_per_gamma) + 1;
  d.grid = uniform_grid(p.m - half_width_over_gamma * p.gamma, p.m + half_width_over_gamma * p.gamma, n);
  for (double e : d.grid) d.density.push_back(breit_wigner_density(e, p));
  return d;
}

}  // namespace

TEST_CASE("Breit-Wigner density values") {
  const BreitWignerParams p{0.7, 2.0};
  CHECK(breit_wigner_density(0.7, p) == doctest::Approx(1.0 / kPi).epsilon(1e-15));
  CHECK(breit_wigner_density(1.7, p) == doctest::Approx(0.5 / kPi).epsilon(1e-15));
  CHECK(breit_wigner_density(-0.3, p) == doctest::Approx(0.5 / kPi).epsilon(1e-15));
  CHECK_THROWS_AS(breit_wigner_density(0.0, {0.0, 0.0}), ValidationError);
}

TEST_CASE("Lorentzian mass on truncated windows") {
  const BreitWignerParams p{3.0, 1.5};
  const double narrow = total_mass(raw_density(p, 50.0, 50.0));
  CHECK(narrow == doctest::Approx(2.0 / kPi * std::atan(100.0)).epsilon(1e-6));
  CHECK(std::abs(narrow - 1.0) > 1e-3);
  const double wide = total_mass(raw_density(p, 1e4, 20.0));
  CHECK(std::abs(wide - 1.0) < 1e-4);
  CHECK(total_mass(tabulate_breit_wigner(p)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("survival from the energy density") {
  const BreitWignerParams p{0.0, 1.0};
  const EnergyDensity d = tabulate_breit_wigner(p);
  CHECK(survival_from_energy_density(d, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(survival_from_energy_density(d, 2.0) - std::exp(-2.0)) < 1e-3);
  for (double t : {0.5, 1.0, 3.0, 5.0}) {
    CHECK(std::abs(survival_from_energy_density(d, t) - std::exp(-t)) < 1e-3);
    CHECK(std::abs(survival_from_energy_density(d, -t) - survival_from_energy_density(d, t)) < 1e-14);
  }
}

TEST_CASE("survival input checks") {
  const BreitWignerParams p{0.0, 1.0};
  EnergyDensity raw = raw_density(p, 50.0, 50.0);
  CHECK_THROWS_AS(survival_from_energy_density(raw, 1.0), ValidationError);
  const EnergyDensity coarse = tabulate_breit_wigner(p, {100.0, 1.0});
  CHECK_THROWS_AS(survival_from_energy_density(coarse, 1.0), ResolutionError);
  CHECK_NOTHROW(survival_from_energy_density(coarse, 0.4));
}

TEST_CASE("temporal wave function in energy space") {
  const BreitWignerParams p{1.2, 0.8};
  CHECK(std::norm(twf_energy_amplitude(1.2, p)) == doctest::Approx(2.0 / (kPi * 0.8)).epsilon(1e-14));
  const auto at_peak = twf_energy_amplitude(1.2, p);
  CHECK(at_peak.real() < 0.0);
  CHECK(std::abs(at_peak.imag()) < 1e-15);
  CHECK(at_peak.real() == doctest::Approx(-std::sqrt(0.8 / (2.0 * kPi)) / 0.4).epsilon(1e-14));

  const auto amp = tabulate_twf_amplitude(p, {200.0, 5.0});
  for (std::size_t i = 0; i < amp.grid.size(); i += 37) {
    const double ratio = std::norm(amp.values[i]) / breit_wigner_density(amp.grid[i], p);
    CHECK(std::abs(ratio - 1.0) < 1e-12);
  }
}

TEST_CASE("temporal survival integrates the decay-time density") {
  const BreitWignerParams p{5.0, 2.5};
  CHECK(std::abs(twf_time_amplitude(-1.0, p)) == 0.0);
  CHECK(std::norm(twf_time_amplitude(0.0, p)) == doctest::Approx(2.5));
  for (double t : {0.0, 0.3, 1.0, 2.0}) CHECK(twf_survival(t, p) == doctest::Approx(std::exp(-2.5 * t)).epsilon(1e-12));
  CHECK_THROWS_AS(twf_survival(-0.1, p), DomainError);
}

TEST_CASE("both readings of the line agree") {
  const auto r = equivalence_report({0.0, 1.0});
  CHECK(r.max_density_deviation < 1e-3);
  CHECK(r.max_standard_survival_deviation < 1e-3);
  CHECK(r.max_twf_survival_deviation < 1e-3);
  CHECK(r.max_survival_deviation < 1e-3);
  REQUIRE(r.times.size() == 51);
  CHECK(r.times.back() == doctest::Approx(5.0));
}

TEST_CASE("equivalence is invariant under rescaling the width") {
  const auto narrow = equivalence_report({0.0, 0.1}, {2000.0, 50.0}, {5.0, 11});
  const auto wide = equivalence_report({0.0, 10.0}, {2000.0, 50.0}, {5.0, 11});
  CHECK(narrow.max_density_deviation == doctest::Approx(wide.max_density_deviation).epsilon(1e-6));
  CHECK(narrow.max_standard_survival_deviation == doctest::Approx(wide.max_standard_survival_deviation).epsilon(1e-6));
  CHECK(narrow.max_survival_deviation < 1e-3);
  CHECK(wide.max_survival_deviation < 1e-3);
  CHECK(wide.times.back() == doctest::Approx(0.5));
}

TEST_CASE("standard survival decays at the Breit-Wigner width") {
  const BreitWignerParams p{0.0, 1.0};
  const EnergyDensity d = tabulate_breit_wigner(p);
  const double h = 1e-3;
  for (double t : {0.25, 1.0, 2.5, 4.5}) {
    const double derivative =
        -(survival_from_energy_density(d, t + h) - survival_from_energy_density(d, t - h)) / (2.0 * h);
    CHECK(std::abs(derivative - std::norm(twf_time_amplitude(t, p))) < 1e-3);
  }
}

TEST_CASE("degenerate grids") {
  CHECK_THROWS_AS(equivalence_report({0.0, 1.0}, {0.0, 50.0}), ResolutionError);
  CHECK_THROWS_AS(equivalence_report({0.0, 1.0}, {2000.0, 50.0}, {5.0, 1}), ResolutionError);
  CHECK_THROWS_AS(total_mass({{1.0}, {1.0}}), ResolutionError);
}

TEST_CASE("curve CSV") {
  CHECK(curve_csv("t", {0.0, 0.5}, {1.0, 0.25}) == "t,value\n0,1\n0.5,0.25\n");
  CHECK_THROWS_AS(curve_csv("t", {0.0}, {1.0, 0.25}), GridMismatch);
}
