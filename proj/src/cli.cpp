#include "kaonlab/cli.hpp"

#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "kaonlab/asymmetry.hpp"
#include "kaonlab/errors.hpp"
#include "kaonlab/events.hpp"
#include "kaonlab/fit.hpp"
#include "kaonlab/golden_rule.hpp"
#include "kaonlab/model.hpp"
#include "kaonlab/pipeline.hpp"
#include "kaonlab/spectral.hpp"
#include "kaonlab/wwa.hpp"

namespace kaonlab::cli {
namespace {

using nlohmann::json;

struct ModelFlags {
  std::string model = "wwa";
  std::string variant;

  void add(CLI::App& app) {
    app.add_option("--model", model, "Decay model")->check(CLI::IsMember({"wwa", "twf"}))->capture_default_str();
    app.add_option("--twf-variant", variant, "T.W.F. eps_s matching (required with --model twf)")
        ->check(CLI::IsMember({"matched_large_t", "matched_three_pion"}));
  }

  Model resolve() const {
    if (model == "wwa") return Model::wwa();
    if (variant.empty()) {
      throw ConfigError("--twf-variant", "required with --model twf (matched_large_t or matched_three_pion)");
    }
    return Model::twf(twf::parse_variant(variant));
  }
};

KaonPhysics physics_from(const std::string& path) {
  if (path.empty()) return default_physics();
  return load_physics(KeyValues::parse_file(path));
}

json physics_json(const KaonPhysics& p) {
  json j = json::object();
  const KeyValues kv = to_key_values(p);
  for (const auto& [k, v] : kv.entries()) j[k] = std::stod(v);
  return j;
}

void write_sidecar(const std::string& out, const json& echo) {
  write_text_file(out + ".json", echo.dump(2) + "\n");
}

std::vector<Channel> parse_channels(const std::string& list) {
  if (list == "all") return {kAllChannels.begin(), kAllChannels.end()};
  std::vector<Channel> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_channel(item));
  if (out.empty()) throw ConfigError("--channels", "no channel given");
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"kaonlab: neutral-kaon decay models, asymmetry, event generation and fits"};
  app.require_subcommand(1);
  app.allow_extras(false);

  std::string config;
  int threads = 1;
  std::function<void()> action;

  // rates
  auto* rates = app.add_subcommand("rates", "Production rate of one channel vs time (units of tau_S)");
  ModelFlags rates_model;
  std::string rates_initial = "K0", rates_channel = "two_pion", rates_out;
  double rates_t_min = 0.0, rates_t_max = 20.0;
  int rates_points = 201;
  rates_model.add(*rates);
  rates->add_option("--config", config, "Physics key-value file");
  rates->add_option("--initial", rates_initial, "K0, K0bar, K1, K2, KS or KL")->capture_default_str();
  rates->add_option("--channel", rates_channel, "two_pion, three_pion, semileptonic_plus, semileptonic_minus")
      ->capture_default_str();
  rates->add_option("--t-min", rates_t_min)->capture_default_str();
  rates->add_option("--t-max", rates_t_max)->capture_default_str();
  rates->add_option("--points", rates_points)->capture_default_str();
  rates->add_option("--out", rates_out, "CSV output")->required();
  rates->callback([&] {
    action = [&] {
      const KaonPhysics physics = physics_from(config);
      const Model model = rates_model.resolve();
      const DecayModel bound(model, physics);
      const Flavor initial = parse_flavor(rates_initial);
      const Channel channel = parse_channel(rates_channel);
      const RateCurve curve = rate_curve(bound, channel, initial, rates_t_min, rates_t_max, rates_points);
      write_text_file(rates_out, spectral::curve_csv("t_over_tau_s", curve.times, curve.rates));
      write_sidecar(rates_out, {{"command", "rates"}, {"model", to_string(model)}, {"initial", rates_initial},
                                {"channel", rates_channel}, {"t_min", rates_t_min}, {"t_max", rates_t_max},
                                {"points", rates_points}, {"physics", physics_json(physics)}});
    };
  });

  // asymmetry
  auto* asym = app.add_subcommand("asymmetry", "Two-pion asymmetry A(t) on a uniform grid");
  ModelFlags asym_model;
  double asym_t_min = 0.0, asym_t_max = 20.0;
  int asym_points = 201;
  std::string asym_out;
  asym_model.add(*asym);
  asym->add_option("--config", config, "Physics key-value file");
  asym->add_option("--t-min", asym_t_min)->capture_default_str();
  asym->add_option("--t-max", asym_t_max)->capture_default_str();
  asym->add_option("--points", asym_points)->capture_default_str();
  asym->add_option("--threads", threads)->capture_default_str()->check(CLI::PositiveNumber);
  asym->add_option("--out", asym_out, "CSV output")->required();
  asym->callback([&] {
    action = [&] {
      const KaonPhysics physics = physics_from(config);
      const Model model = asym_model.resolve();
      const AsymmetryCurve curve = asymmetry_curve(model, asym_t_min, asym_t_max, asym_points, physics, threads);
      write_text_file(asym_out, to_csv(curve));
      const json summary = {{"model", to_string(model)},
                            {"small_t_limit", asymmetry_at(model, 0.0, physics)},
                            {"large_t_limit", large_t_limit(model, physics)}};
      write_sidecar(asym_out, {{"command", "asymmetry"}, {"model", to_string(model)}, {"t_min", asym_t_min},
                               {"t_max", asym_t_max}, {"points", asym_points}, {"threads", threads},
                               {"physics", physics_json(physics)}, {"summary", summary}});
      out << summary.dump(2) << '\n';
    };
  });

  // golden-rule
  auto* gr = app.add_subcommand("golden-rule", "Coupled-mode decay into flat continua vs the golden rule");
  std::string gr_scenario, gr_out;
  gr->add_option("--scenario", gr_scenario, "Scenario key-value file (default: two species, widths 1 and 2)");
  gr->add_option("--out", gr_out, "Trajectory CSV output");
  gr->callback([&] {
    action = [&] {
      golden_rule::Scenario scenario;
      if (gr_scenario.empty()) {
        scenario.species_gammas = {1.0, 2.0};
      } else {
        scenario = golden_rule::Scenario::from_key_values(KeyValues::parse_file(gr_scenario));
      }
      const auto result = golden_rule::run_scenario(scenario);
      json scenario_echo = json::object();
      const KeyValues scenario_kv = scenario.to_key_values();
      for (const auto& [k, v] : scenario_kv.entries()) scenario_echo[k] = std::stod(v);
      const json summary = {{"scenario", scenario_echo},
                            {"predicted_gamma_per_species", result.predicted.per_species},
                            {"predicted_gamma_total", result.predicted.total},
                            {"fitted_gamma_total", result.fitted_gamma},
                            {"branching_fractions", result.branching},
                            {"n_steps", result.n_steps},
                            {"max_norm_drift", result.trajectory.max_norm_drift}};
      if (!gr_out.empty()) {
        write_text_file(gr_out, golden_rule::trajectory_csv(result.trajectory));
        write_sidecar(gr_out, summary);
      }
      out << summary.dump(2) << '\n';
    };
  });

  // spectral
  auto* sp = app.add_subcommand("spectral", "Breit-Wigner line vs temporal wave function equivalence");
  double sp_mass = 0.0, sp_gamma = 1.0, sp_half_width = 2000.0, sp_ppg = 50.0, sp_t_max = 5.0;
  int sp_t_points = 51;
  std::string sp_out;
  sp->add_option("--mass", sp_mass)->capture_default_str();
  sp->add_option("--gamma", sp_gamma)->capture_default_str();
  sp->add_option("--half-width", sp_half_width, "Energy window half-width in units of Gamma")->capture_default_str();
  sp->add_option("--points-per-gamma", sp_ppg)->capture_default_str();
  sp->add_option("--t-max-gamma", sp_t_max, "Last time in units of 1/Gamma")->capture_default_str();
  sp->add_option("--t-points", sp_t_points)->capture_default_str();
  sp->add_option("--out", sp_out, "Survival CSV output");
  sp->callback([&] {
    action = [&] {
      const spectral::BreitWignerParams p{sp_mass, sp_gamma};
      const auto report = spectral::equivalence_report(p, {sp_half_width, sp_ppg}, {sp_t_max, sp_t_points});
      const json summary = {{"mass", sp_mass},
                            {"gamma", sp_gamma},
                            {"half_width_over_gamma", sp_half_width},
                            {"points_per_gamma", sp_ppg},
                            {"t_max_times_gamma", sp_t_max},
                            {"t_points", sp_t_points},
                            {"max_density_deviation", report.max_density_deviation},
                            {"max_standard_survival_deviation", report.max_standard_survival_deviation},
                            {"max_twf_survival_deviation", report.max_twf_survival_deviation},
                            {"max_survival_deviation", report.max_survival_deviation}};
      if (!sp_out.empty()) {
        std::ostringstream csv;
        csv << "t,standard,twf\n";
        for (std::size_t i = 0; i < report.times.size(); ++i) {
          csv << format_number(report.times[i]) << ',' << format_number(report.standard_survival[i]) << ','
              << format_number(report.twf_survival[i]) << '\n';
        }
        write_text_file(sp_out, csv.str());
        write_sidecar(sp_out, summary);
      }
      out << summary.dump(2) << '\n';
    };
  });

  // generate
  auto* gen = app.add_subcommand("generate", "Monte Carlo decay events");
  ModelFlags gen_model;
  std::string gen_initial = "K0", gen_channels = "two_pion", gen_out;
  long long gen_n = 100000;
  std::uint64_t gen_seed = 1;
  events::SamplerOptions gen_opts;
  gen_model.add(*gen);
  gen->add_option("--config", config, "Physics key-value file");
  gen->add_option("--initial", gen_initial)->capture_default_str();
  gen->add_option("--n", gen_n)->capture_default_str()->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_seed)->capture_default_str();
  gen->add_option("--t-max", gen_opts.t_max)->capture_default_str();
  gen->add_option("--grid-points", gen_opts.grid_points)->capture_default_str();
  gen->add_option("--channels", gen_channels, "Comma-separated channels or 'all'")->capture_default_str();
  gen->add_option("--threads", threads)->capture_default_str()->check(CLI::PositiveNumber);
  gen->add_option("--out", gen_out, "Event CSV output")->required();
  gen->callback([&] {
    action = [&] {
      const KaonPhysics physics = physics_from(config);
      const Model model = gen_model.resolve();
      gen_opts.channels = parse_channels(gen_channels);
      gen_opts.threads = threads;
      const Flavor initial = parse_flavor(gen_initial);
      const auto evts = events::sample(model, initial, gen_n, gen_seed, physics, gen_opts);
      write_text_file(gen_out, events::to_csv(evts));
      json echo = events::sidecar(model, initial, gen_n, gen_seed, physics, gen_opts);
      echo["threads"] = threads;
      write_sidecar(gen_out, echo);
    };
  });

  // fit
  auto* ft = app.add_subcommand("fit", "Fit eps to binned two-pion asymmetry and score fixed models");
  std::string fit_k0, fit_k0bar, fit_out, fit_variant;
  double fit_lo = 1.0, fit_hi = 20.0, fit_width = 1.0;
  ft->add_option("--config", config, "Physics key-value file");
  ft->add_option("--events-k0", fit_k0, "K0-tagged event CSV")->required();
  ft->add_option("--events-k0bar", fit_k0bar, "K0bar-tagged event CSV")->required();
  ft->add_option("--t-lo", fit_lo)->capture_default_str();
  ft->add_option("--t-hi", fit_hi)->capture_default_str();
  ft->add_option("--bin-width", fit_width)->capture_default_str();
  ft->add_option("--twf-variant", fit_variant, "Also score this T.W.F. variant")
      ->check(CLI::IsMember({"matched_large_t", "matched_three_pion"}));
  ft->add_option("--out", fit_out, "Fit JSON output")->required();
  ft->callback([&] {
    action = [&] {
      const KaonPhysics physics = physics_from(config);
      const auto k0 = events::read_csv(fit_k0);
      const auto k0bar = events::read_csv(fit_k0bar);
      const auto edges = events::uniform_edges(fit_lo, fit_hi, fit_width);
      const auto data = events::bin_asymmetry(k0, k0bar, edges);
      const auto result = fit::fit_epsilon(data, physics);
      json j = fit::to_json(result);
      json scores = {{"wwa", fit::to_json(fit::model_chi2(Model::wwa(), data, physics))}};
      if (!fit_variant.empty()) {
        const Model twf = Model::twf(twf::parse_variant(fit_variant));
        scores[to_string(twf)] = fit::to_json(fit::model_chi2(twf, data, physics));
      }
      j["model_chi2"] = scores;
      j["config"] = {{"events_k0", fit_k0}, {"events_k0bar", fit_k0bar}, {"t_lo", fit_lo},
                     {"t_hi", fit_hi},      {"bin_width", fit_width},   {"physics", physics_json(physics)}};
      write_text_file(fit_out, j.dump(2) + "\n");
      out << j.dump(2) << '\n';
    };
  });

  // study
  auto* st = app.add_subcommand("study", "End-to-end falsification study");
  std::optional<std::uint64_t> st_seed;
  std::optional<int> st_threads;
  std::string st_out;
  st->add_option("--config", config, "Study key-value file (physics keys plus study keys)")->required();
  st->add_option("--seed", st_seed, "Overrides the seed in the config file");
  st->add_option("--threads", st_threads)->check(CLI::PositiveNumber);
  st->add_option("--out", st_out, "Output directory")->required();
  st->callback([&] {
    action = [&] {
      auto cfg = pipeline::StudyConfig::from_key_values(KeyValues::parse_file(config));
      if (st_seed) cfg.seed = *st_seed;
      if (st_threads) cfg.threads = *st_threads;
      const auto report = pipeline::run_study(cfg, std::filesystem::path(st_out));
      const json summary = {{"wwa", pipeline::to_json(report)["verdicts"]["wwa"]},
                            {"twf", pipeline::to_json(report)["verdicts"]["twf"]},
                            {"epsilon_hat_abs", std::abs(report.fit.epsilon_hat)},
                            {"out", st_out}};
      out << summary.dump(2) << '\n';
    };
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationFailure;
  }

  try {
    if (action) action();
    return kOk;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationFailure;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationFailure;
  } catch (const StageError& e) {
    err << "error: stage " << e.what() << '\n';
    return kRuntimeFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeFailure;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace kaonlab::cli
