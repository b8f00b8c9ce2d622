#pragma once

#include <span>
#include <string>
#include <string_view>

#include "kaonlab/params.hpp"
#include "kaonlab/twf.hpp"
#include "kaonlab/types.hpp"
#include "kaonlab/wwa.hpp"

namespace kaonlab {

enum class ModelKind { WWA, TWF };

/// Which decay description to evaluate. The variant matters only for TWF.
struct Model {
  ModelKind kind = ModelKind::WWA;
  twf::Variant variant = twf::Variant::MatchedLargeT;

  static Model wwa() { return {ModelKind::WWA, twf::Variant::MatchedLargeT}; }
  static Model twf(twf::Variant v) { return {ModelKind::TWF, v}; }

  friend bool operator==(const Model& a, const Model& b) {
    return a.kind == b.kind && (a.kind == ModelKind::WWA || a.variant == b.variant);
  }
};

/// "wwa", "twf:matched_large_t", "twf:matched_three_pion".
std::string to_string(const Model& m);
Model parse_model(std::string_view name);

/// A model bound to a set of constants: evaluates per-channel rates.
class DecayModel {
public:
  DecayModel(Model model, const KaonPhysics& physics);

  const Model& model() const { return model_; }
  const DerivedConstants& constants() const { return constants_; }
  const twf::Params& twf_params() const { return twf_params_; }

  /// Rate / channel width (width-free shape used for asymmetries).
  double weight(Channel channel, Flavor initial, double t) const;
  /// Rate in 1/tau_S.
  double rate(Channel channel, Flavor initial, double t) const;
  /// Sum of rate over the given channels.
  double total_rate(std::span<const Channel> channels, Flavor initial, double t) const;

private:
  Model model_;
  DerivedConstants constants_;
  twf::Params twf_params_;
};

/// Rates sampled on a uniform grid [t_min, t_max] with n points.
RateCurve rate_curve(const DecayModel& model, Channel channel, Flavor initial, double t_min, double t_max, int n);

}  // namespace kaonlab
