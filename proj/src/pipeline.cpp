#include "kaonlab/pipeline.hpp"

#include <algorithm>
#include <string>

#include "kaonlab/errors.hpp"

namespace kaonlab::pipeline {
namespace {

const std::vector<std::string>& study_keys() {
  static const std::vector<std::string> keys = {
      "twf_variant",  "generator_model", "events_per_flavor", "seed",          "sample_t_max",
      "grid_points",  "bin_width",       "fit_t_min",         "fit_t_max",     "curve_t_min",
      "curve_t_max",  "curve_points",    "threads",           "write_events",  "use_defaults"};
  return keys;
}

template <typename F>
auto stage(const char* name, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

nlohmann::json discrepancy_json(const Discrepancy& d) {
  nlohmann::json j = {{"max_abs_diff", d.max_abs_diff}, {"argmax_t", d.argmax_t}};
  if (d.n_sigma) j["n_sigma"] = *d.n_sigma;
  return j;
}

nlohmann::json curve_json(const AsymmetryCurve& c) {
  return {{"model", to_string(c.model)}, {"times", c.times}, {"values", c.values}};
}

nlohmann::json verdict_json(const ModelVerdict& v) {
  return {{"model", to_string(v.model)},
          {"chi2", fit::to_json(v.chi2)},
          {"verdict", v.verdict == Verdict::Falsified ? "falsified" : "consistent"}};
}

}  // namespace

StudyConfig StudyConfig::from_key_values(const KeyValues& kv) {
  std::vector<std::string> allowed = physics_keys();
  allowed.insert(allowed.end(), study_keys().begin(), study_keys().end());
  kv.reject_unknown(allowed);

  KeyValues physics_doc;
  for (const auto& [k, v] : kv.entries()) {
    const auto& pk = physics_keys();
    if (std::find(pk.begin(), pk.end(), k) != pk.end() || k == "use_defaults") physics_doc.set(k, v);
  }
  StudyConfig c;
  c.physics = load_physics(physics_doc);
  c.twf_variant = twf::parse_variant(kv.get_string("twf_variant"));
  c.generator = parse_model(kv.get_string("generator_model", "wwa"));
  c.events_per_flavor = kv.get_int("events_per_flavor", c.events_per_flavor);
  const long long seed = kv.get_int("seed", static_cast<long long>(c.seed));
  if (seed < 0) throw ConfigError("seed", "must be nonnegative");
  c.seed = static_cast<std::uint64_t>(seed);
  c.sample_t_max = kv.get_double("sample_t_max", c.sample_t_max);
  c.grid_points = static_cast<int>(kv.get_int("grid_points", c.grid_points));
  c.bin_width = kv.get_double("bin_width", c.bin_width);
  c.fit_t_min = kv.get_double("fit_t_min", c.fit_t_min);
  c.fit_t_max = kv.get_double("fit_t_max", c.fit_t_max);
  c.curve_t_min = kv.get_double("curve_t_min", c.curve_t_min);
  c.curve_t_max = kv.get_double("curve_t_max", c.curve_t_max);
  c.curve_points = static_cast<int>(kv.get_int("curve_points", c.curve_points));
  c.threads = static_cast<int>(kv.get_int("threads", c.threads));
  c.write_events = kv.contains("write_events") ? kv.get_bool("write_events") : c.write_events;
  if (c.events_per_flavor < 1) throw ConfigError("events_per_flavor", "must be at least 1");
  if (c.threads < 1) throw ConfigError("threads", "must be at least 1");
  return c;
}

KeyValues StudyConfig::to_key_values() const {
  KeyValues kv = kaonlab::to_key_values(physics);
  kv.set("twf_variant", std::string(twf::to_string(twf_variant)));
  kv.set("generator_model", to_string(generator));
  kv.set("events_per_flavor", std::to_string(events_per_flavor));
  kv.set("seed", std::to_string(seed));
  kv.set("sample_t_max", format_number(sample_t_max));
  kv.set("grid_points", std::to_string(grid_points));
  kv.set("bin_width", format_number(bin_width));
  kv.set("fit_t_min", format_number(fit_t_min));
  kv.set("fit_t_max", format_number(fit_t_max));
  kv.set("curve_t_min", format_number(curve_t_min));
  kv.set("curve_t_max", format_number(curve_t_max));
  kv.set("curve_points", std::to_string(curve_points));
  kv.set("threads", std::to_string(threads));
  kv.set("write_events", write_events ? "true" : "false");
  return kv;
}

Verdict verdict_for(const fit::ModelChi2& chi2) {
  return chi2.n_sigma > kFalsificationSigma ? Verdict::Falsified : Verdict::Consistent;
}

StudyReport run_study(const StudyConfig& config, const std::optional<std::filesystem::path>& out_dir) {
  StudyReport r;
  r.config = config;
  const Model wwa = Model::wwa();
  const Model twf = Model::twf(config.twf_variant);

  stage("constrain", [&] { twf::validate(twf::constrain(config.physics, config.twf_variant)); });

  stage("curves", [&] {
    r.wwa_curve = asymmetry_curve(wwa, config.curve_t_min, config.curve_t_max, config.curve_points, config.physics,
                                  config.threads);
    r.twf_curve = asymmetry_curve(twf, config.curve_t_min, config.curve_t_max, config.curve_points, config.physics,
                                  config.threads);
  });

  stage("limits", [&] {
    r.wwa_small_t = asymmetry_at(wwa, 0.0, config.physics);
    r.twf_small_t = asymmetry_at(twf, 0.0, config.physics);
    r.wwa_large_t = large_t_limit(wwa, config.physics);
    r.twf_large_t = large_t_limit(twf, config.physics);
  });

  stage("discrepancy", [&] {
    r.discrepancy_1_10 = discrepancy(r.wwa_curve, r.twf_curve, 1.0, 10.0);
    r.discrepancy_10_40 = discrepancy(r.wwa_curve, r.twf_curve, 10.0, 40.0);
  });

  std::vector<events::DecayEvent> k0, k0bar;
  stage("events", [&] {
    events::SamplerOptions opts;
    opts.t_max = config.sample_t_max;
    opts.grid_points = config.grid_points;
    opts.threads = config.threads;
    opts.channels = {Channel::TwoPion};
    k0 = events::sample(config.generator, Flavor::K0, config.events_per_flavor, config.seed, config.physics, opts);
    k0bar = events::sample(config.generator, Flavor::K0bar, config.events_per_flavor,
                           config.seed + 0x9E3779B97F4A7C15ULL, config.physics, opts);
    const auto edges = events::uniform_edges(config.fit_t_min, config.fit_t_max, config.bin_width);
    r.data = events::bin_asymmetry(k0, k0bar, edges);
  });

  stage("fit", [&] { r.fit = fit::fit_epsilon(r.data, config.physics); });

  stage("verdict", [&] {
    r.wwa = {wwa, fit::model_chi2(wwa, r.data, config.physics), Verdict::Consistent};
    r.wwa.verdict = verdict_for(r.wwa.chi2);
    r.twf = {twf, fit::model_chi2(twf, r.data, config.physics), Verdict::Consistent};
    r.twf.verdict = verdict_for(r.twf.chi2);
  });

  if (out_dir) {
    stage("write", [&] {
      const auto& dir = *out_dir;
      write_text_file(dir / "wwa_curve.csv", to_csv(r.wwa_curve));
      write_text_file(dir / "twf_curve.csv", to_csv(r.twf_curve));
      write_text_file(dir / "fit.json", fit::to_json(r.fit).dump(2) + "\n");
      if (config.write_events) {
        write_text_file(dir / "events_k0.csv", events::to_csv(k0));
        write_text_file(dir / "events_k0bar.csv", events::to_csv(k0bar));
      }
      write_text_file(dir / "report.json", to_json(r).dump(2) + "\n");
    });
  }
  return r;
}

nlohmann::json to_json(const StudyReport& r) {
  nlohmann::json config = nlohmann::json::object();
  const KeyValues config_kv = r.config.to_key_values();
  for (const auto& [k, v] : config_kv.entries()) config[k] = v;
  return {{"config", config},
          {"curves", {{"wwa", curve_json(r.wwa_curve)}, {"twf", curve_json(r.twf_curve)}}},
          {"limits",
           {{"wwa", {{"small_t", r.wwa_small_t}, {"large_t", r.wwa_large_t}}},
            {"twf", {{"small_t", r.twf_small_t}, {"large_t", r.twf_large_t}}}}},
          {"discrepancy", {{"window_1_10", discrepancy_json(r.discrepancy_1_10)},
                           {"window_10_40", discrepancy_json(r.discrepancy_10_40)}}},
          {"data", events::to_json(r.data)},
          {"fit", fit::to_json(r.fit)},
          {"verdicts", {{"wwa", verdict_json(r.wwa)}, {"twf", verdict_json(r.twf)}}},
          {"falsification_threshold_sigma", kFalsificationSigma}};
}

}  // namespace kaonlab::pipeline
