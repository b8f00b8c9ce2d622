#include "kaonlab/asymmetry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include "kaonlab/errors.hpp"
#include "kaonlab/grid.hpp"
#include "kaonlab/io.hpp"
#include "kaonlab/quadrature.hpp"

namespace kaonlab {
namespace {

double ratio(double k0, double k0bar) {
  const double sum = k0 + k0bar;
  if (!(sum > 0.0)) throw DegeneratePoint("two-pion rates of K0 and K0bar both vanish");
  return (k0bar - k0) / sum;
}

}  // namespace

double asymmetry_at(const DecayModel& model, double t) {
  return ratio(model.weight(Channel::TwoPion, Flavor::K0, t), model.weight(Channel::TwoPion, Flavor::K0bar, t));
}

double asymmetry_at(const Model& model, double t, const KaonPhysics& physics) {
  return asymmetry_at(DecayModel(model, physics), t);
}

double large_t_limit(const Model& model, const KaonPhysics& physics) {
  if (model.kind == ModelKind::WWA) return 2.0 * physics.epsilon.real();
  return 2.0 * twf::constrain(physics, model.variant).eps_s_tilde.real();
}

AsymmetryCurve asymmetry_curve(const Model& model, double t_min, double t_max, int n_points,
                               const KaonPhysics& physics, int threads) {
  if (t_min < 0.0) throw DomainError("curve start must be nonnegative");
  const DecayModel bound(model, physics);
  AsymmetryCurve curve;
  curve.model = model;
  curve.times = uniform_grid(t_min, t_max, n_points);
  curve.values.assign(curve.times.size(), 0.0);

  const std::size_t n = curve.times.size();
  const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), 1, n);
  auto fill = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) curve.values[i] = asymmetry_at(bound, curve.times[i]);
  };
  if (workers == 1) {
    fill(0, n);
    return curve;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          fill(n * w / workers, n * (w + 1) / workers);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return curve;
}

Discrepancy discrepancy(const AsymmetryCurve& a, const AsymmetryCurve& b, double t_lo, double t_hi) {
  if (a.times != b.times) throw GridMismatch("curves are sampled on different time grids");
  if (a.values.size() != a.times.size() || b.values.size() != b.times.size()) {
    throw GridMismatch("curve values do not match their time grid");
  }
  const bool weighted = !a.sigma.empty();
  if (weighted && a.sigma.size() != a.times.size()) throw GridMismatch("sigma does not match the time grid");

  Discrepancy out;
  bool any = false;
  double max_sig = 0.0;
  for (std::size_t i = 0; i < a.times.size(); ++i) {
    const double t = a.times[i];
    if (t < t_lo || t > t_hi) continue;
    const double diff = std::abs(a.values[i] - b.values[i]);
    if (!any || diff > out.max_abs_diff) {
      out.max_abs_diff = diff;
      out.argmax_t = t;
    }
    any = true;
    if (weighted && a.sigma[i] > 0.0) max_sig = std::max(max_sig, diff / a.sigma[i]);
  }
  if (!any) throw GridMismatch("no grid point inside the comparison window");
  if (weighted) out.n_sigma = max_sig;
  return out;
}

std::vector<double> binned_model_asymmetry(const DecayModel& model, std::span<const double> edges) {
  if (edges.size() < 2) throw ValidationError("need at least one bin");
  static const quad::GaussLegendre<double> rule(8);
  std::vector<double> out;
  out.reserve(edges.size() - 1);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double lo = edges[i];
    const double hi = edges[i + 1];
    if (!(hi > lo) || lo < 0.0) throw ValidationError("bin edges must be nonnegative and increasing");
    const int panels = std::max(1, static_cast<int>(std::ceil((hi - lo) / 0.25)));
    const double k0 = rule.integrate([&](double t) { return model.weight(Channel::TwoPion, Flavor::K0, t); },
                                     lo, hi, panels);
    const double k0bar = rule.integrate(
        [&](double t) { return model.weight(Channel::TwoPion, Flavor::K0bar, t); }, lo, hi, panels);
    out.push_back(ratio(k0, k0bar));
  }
  return out;
}

std::string to_csv(const AsymmetryCurve& curve) {
  const bool with_sigma = !curve.sigma.empty();
  std::ostringstream out;
  out << "t_over_tau_s,value" << (with_sigma ? ",sigma" : "") << '\n';
  for (std::size_t i = 0; i < curve.times.size(); ++i) {
    out << format_number(curve.times[i]) << ',' << format_number(curve.values[i]);
    if (with_sigma) out << ',' << format_number(curve.sigma[i]);
    out << '\n';
  }
  return out.str();
}

}  // namespace kaonlab
