#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>

#include <json.hpp>

#include "kaonlab/asymmetry.hpp"
#include "kaonlab/events.hpp"
#include "kaonlab/fit.hpp"
#include "kaonlab/io.hpp"
#include "kaonlab/model.hpp"
#include "kaonlab/params.hpp"

namespace kaonlab::pipeline {

/// Everything a falsification study needs. Times in units of tau_S.
struct StudyConfig {
  KaonPhysics physics;
  twf::Variant twf_variant = twf::Variant::MatchedLargeT;
  Model generator = Model::wwa();
  long long events_per_flavor = 1000000;
  std::uint64_t seed = 42;
  double sample_t_max = 1000.0;
  int grid_points = 10001;
  double bin_width = 1.0;
  double fit_t_min = 1.0;
  double fit_t_max = 20.0;
  double curve_t_min = 0.0;
  double curve_t_max = 40.0;
  int curve_points = 401;
  int threads = 1;
  bool write_events = true;

  /// Physics keys plus the study keys below. `twf_variant` is required; other
  /// study keys default to the member initializers. Unknown keys are rejected.
  static StudyConfig from_key_values(const KeyValues& kv);
  KeyValues to_key_values() const;
};

enum class Verdict { Consistent, Falsified };

/// Verdict threshold on model_chi2 n_sigma.
inline constexpr double kFalsificationSigma = 5.0;

struct ModelVerdict {
  Model model;
  fit::ModelChi2 chi2;
  Verdict verdict = Verdict::Consistent;
};

struct StudyReport {
  StudyConfig config;
  AsymmetryCurve wwa_curve;
  AsymmetryCurve twf_curve;
  double wwa_small_t = 0.0;
  double twf_small_t = 0.0;
  double wwa_large_t = 0.0;
  double twf_large_t = 0.0;
  Discrepancy discrepancy_1_10;
  Discrepancy discrepancy_10_40;
  events::BinnedAsymmetry data;
  fit::FitResult fit;
  ModelVerdict wwa;
  ModelVerdict twf;
};

/// Derives the T.W.F. parameters, computes both curves and their limits,
/// generates K0 and K0bar data from config.generator, fits eps and scores both
/// models. Writes report.json, wwa_curve.csv, twf_curve.csv, events_k0.csv,
/// events_k0bar.csv and fit.json to `out_dir` when given. A failing stage is
/// rethrown as StageError carrying the stage name.
StudyReport run_study(const StudyConfig& config, const std::optional<std::filesystem::path>& out_dir = std::nullopt);

Verdict verdict_for(const fit::ModelChi2& chi2);

nlohmann::json to_json(const StudyReport& report);

}  // namespace kaonlab::pipeline
