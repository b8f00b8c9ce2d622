#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>

#include "kaonlab/asymmetry.hpp"
#include "kaonlab/golden_rule.hpp"
#include "kaonlab/model.hpp"
#include "kaonlab/pipeline.hpp"
#include "kaonlab/spectral.hpp"

using namespace kaonlab;

namespace {

struct Check {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, const std::function<Check()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Check c;
  try {
    c = body();
  } catch (const std::exception& e) {
    c = {false, std::string("threw: ") + e.what()};
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!c.pass) ++failures;
  std::printf("criterion %d: %s  %s | %s [%.2f s]\n", id, c.pass ? "PASS" : "FAIL", title, c.detail.c_str(), seconds);
  std::fflush(stdout);
}

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

const Model kLargeT = Model::twf(twf::Variant::MatchedLargeT);
const Model kThreePion = Model::twf(twf::Variant::MatchedThreePion);

}  // namespace

int main() {
  const KaonPhysics physics = default_physics();

  criterion(1, "small-t asymmetry split", [&] {
    const double wwa = asymmetry_at(Model::wwa(), 1e-9, physics);
    const double twf = asymmetry_at(kLargeT, 1e-9, physics);
    const bool pass = std::abs(wwa) < 1e-6 && twf >= 0.070 && twf <= 0.085;
    return Check{pass, fmt("A_wwa(1e-9)=%.3e (|.|<1e-6), A_twf(1e-9)=%.5f (in [0.070,0.085])", wwa, twf)};
  });

  criterion(2, "large-t limits", [&] {
    const double wwa = large_t_limit(Model::wwa(), physics);
    const double large_t = large_t_limit(kLargeT, physics);
    const double three_pion = large_t_limit(kThreePion, physics);
    // The closed-form limit is also checked against the curve itself far out.
    const double tail = asymmetry_at(Model::wwa(), 200.0, physics);
    const bool pass = std::abs(wwa - 3.23e-3) <= 1e-5 && std::abs(large_t - wwa) <= 1e-12 &&
                      std::abs(three_pion / 1.34e-4 - 1.0) <= 0.05 && std::abs(tail - wwa) < 1e-6;
    return Check{pass, fmt("wwa=%.6e, twf_large_t-wwa=%.1e, twf_three_pion=%.4e, A_wwa(200)=%.6e", wwa,
                           large_t - wwa, three_pion, tail)};
  });

  criterion(3, "curve shape on [1,10] and [10,40]", [&] {
    const auto wwa = asymmetry_curve(Model::wwa(), 0.0, 40.0, 4001, physics);
    const auto a = asymmetry_curve(kLargeT, 0.0, 40.0, 4001, physics);
    const auto b = asymmetry_curve(kThreePion, 0.0, 40.0, 4001, physics);
    const double early = discrepancy(wwa, a, 1.0, 10.0).max_abs_diff;
    const double between = discrepancy(a, b, 10.0, 40.0).max_abs_diff;
    const double a_wwa = discrepancy(a, wwa, 10.0, 40.0).max_abs_diff;
    const double b_wwa = discrepancy(b, wwa, 10.0, 40.0).max_abs_diff;
    const bool pass = early > 0.01 && between < a_wwa && between < b_wwa;
    return Check{pass, fmt("max|dA| wwa-twf on [1,10]=%.4f (>0.01); on [10,40]: twf-twf=%.3e, "
                           "large_t-wwa=%.3e, three_pion-wwa=%.3e",
                           early, between, a_wwa, b_wwa)};
  });

  criterion(4, "golden-rule sum rule, widths 1 and 2", [&] {
    golden_rule::Scenario s;
    s.species_gammas = {1.0, 2.0};
    const auto start = std::chrono::steady_clock::now();
    const auto r = golden_rule::run_scenario(s);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = r.fitted_gamma >= 2.94 && r.fitted_gamma <= 3.06 &&
                      std::abs(r.branching[0] / (1.0 / 3.0) - 1.0) <= 0.02 &&
                      std::abs(r.branching[1] / (2.0 / 3.0) - 1.0) <= 0.02 && seconds < 60.0;
    return Check{pass, fmt("fitted Gamma=%.4f (in [2.94,3.06]), branching=(%.4f, %.4f)", r.fitted_gamma,
                           r.branching[0], r.branching[1])};
  });

  criterion(5, "sinc delta limit", [&] {
    const double two_pi = 2.0 * std::numbers::pi;
    const double v1 = golden_rule::sinc_delta_check(1.0);
    const double v10 = golden_rule::sinc_delta_check(10.0);
    const bool pass = std::abs(v1 / two_pi - 1.0) <= 0.01 && std::abs(v10 / two_pi - 1.0) <= 0.01;
    return Check{pass, fmt("t=1: %.5f, t=10: %.5f (2pi=%.5f, 1%%)", v1, v10, two_pi)};
  });

  criterion(6, "spectral indistinguishability", [&] {
    const spectral::BreitWignerParams p{0.0, 1.0};
    const auto r = spectral::equivalence_report(p);
    const bool pass = r.max_density_deviation < 1e-3 && r.max_standard_survival_deviation < 1e-3 &&
                      r.max_twf_survival_deviation < 1e-3;
    return Check{pass, fmt("density dev=%.2e, survival dev standard=%.2e, twf=%.2e (all < 1e-3)",
                           r.max_density_deviation, r.max_standard_survival_deviation,
                           r.max_twf_survival_deviation)};
  });

  criterion(7, "closed-loop falsification at 1e6 events per flavor", [&] {
    pipeline::StudyConfig c;
    c.physics = physics;
    c.twf_variant = twf::Variant::MatchedLargeT;
    c.events_per_flavor = 1000000;
    c.seed = 42;
    c.threads = 4;
    const auto r = pipeline::run_study(c);
    const double abs_eps = std::abs(r.fit.epsilon_hat);
    const double sigma = r.fit.abs_epsilon_sigma();
    const bool pass = std::abs(abs_eps - 2.228e-3) <= 3.0 * sigma && r.twf.chi2.n_sigma > 10.0 &&
                      r.twf.verdict == pipeline::Verdict::Falsified &&
                      r.wwa.verdict == pipeline::Verdict::Consistent;
    return Check{pass, fmt("|eps_hat|=%.4e +- %.1e (pull %.2f), twf n_sigma=%.1f, wwa n_sigma=%.2f", abs_eps,
                           sigma, (abs_eps - 2.228e-3) / sigma, r.twf.chi2.n_sigma, r.wwa.chi2.n_sigma)};
  });

  criterion(8, "reduction with all CP parameters zero", [&] {
    const KaonPhysics zero = with_epsilon(physics, 0.0);
    const DecayModel wwa(Model::wwa(), zero);
    const DecayModel twf(kLargeT, zero);
    double worst = 0.0;
    int points = 0;
    for (Flavor f : {Flavor::K0, Flavor::K0bar}) {
      for (Channel ch : kAllChannels) {
        const auto a = rate_curve(wwa, ch, f, 0.0, 20.0, 200);
        const auto b = rate_curve(twf, ch, f, 0.0, 20.0, 200);
        for (std::size_t i = 0; i < a.rates.size(); ++i, ++points) {
          const double scale = std::max(std::abs(a.rates[i]), std::abs(b.rates[i]));
          const double diff = std::abs(a.rates[i] - b.rates[i]);
          // Exact zeros of a rate (wrong-sign leptons at t = 0) allow 1e-30 absolute.
          worst = std::max(worst, diff / std::max(scale, 1e-18));
        }
      }
    }
    return Check{worst <= 1e-12, fmt("max relative deviation=%.2e over %d points (<= 1e-12)", worst, points)};
  });

  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
