#include "kaonlab/model.hpp"

#include "kaonlab/errors.hpp"
#include "kaonlab/grid.hpp"

namespace kaonlab {

namespace twf {

std::string_view to_string(Variant v) {
  return v == Variant::MatchedLargeT ? "matched_large_t" : "matched_three_pion";
}

Variant parse_variant(std::string_view name) {
  if (name == "matched_large_t") return Variant::MatchedLargeT;
  if (name == "matched_three_pion") return Variant::MatchedThreePion;
  throw ConfigError("twf_variant",
                    "unknown T.W.F. variant '" + std::string(name) + "' (matched_large_t, matched_three_pion)");
}

}  // namespace twf

std::string to_string(const Model& m) {
  if (m.kind == ModelKind::WWA) return "wwa";
  return "twf:" + std::string(twf::to_string(m.variant));
}

Model parse_model(std::string_view name) {
  if (name == "wwa") return Model::wwa();
  constexpr std::string_view prefix = "twf:";
  if (name.starts_with(prefix)) return Model::twf(twf::parse_variant(name.substr(prefix.size())));
  throw ConfigError("model", "unknown model '" + std::string(name) + "' (wwa, twf:<variant>)");
}

DecayModel::DecayModel(Model model, const KaonPhysics& physics)
    : model_(model), constants_(derive(physics)), twf_params_(twf::constrain(constants_, model.variant)) {
  if (model_.kind == ModelKind::TWF) twf::validate(twf_params_);
}

double DecayModel::weight(Channel channel, Flavor initial, double t) const {
  if (model_.kind == ModelKind::WWA) return wwa::channel_weight(channel, initial, t, constants_);
  return twf::channel_weight(channel, initial, t, constants_, twf_params_);
}

double DecayModel::rate(Channel channel, Flavor initial, double t) const {
  return wwa::channel_width(channel, constants_) * weight(channel, initial, t);
}

double DecayModel::total_rate(std::span<const Channel> channels, Flavor initial, double t) const {
  double sum = 0.0;
  for (Channel c : channels) sum += rate(c, initial, t);
  return sum;
}

RateCurve rate_curve(const DecayModel& model, Channel channel, Flavor initial, double t_min, double t_max, int n) {
  RateCurve curve;
  curve.channel = channel;
  curve.times = uniform_grid(t_min, t_max, n);
  curve.rates.reserve(curve.times.size());
  for (double t : curve.times) curve.rates.push_back(model.rate(channel, initial, t));
  return curve;
}

}  // namespace kaonlab
