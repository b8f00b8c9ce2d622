#include <doctest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kaonlab/cli.hpp"
#include "kaonlab/events.hpp"
#include "support.hpp"

using namespace kaonlab;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json read_json(const std::filesystem::path& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

std::size_t line_count(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) ++n;
  return n;
}

}  // namespace

TEST_CASE("help and argument errors") {
  CHECK(run({"--help"}).code == cli::kOk);
  const auto sub = run({"asymmetry", "--help"});
  CHECK(sub.code == cli::kOk);
  CHECK(sub.out.find("--twf-variant") != std::string::npos);
  for (const char* name : {"rates", "golden-rule", "spectral", "generate", "fit", "study"}) {
    CHECK_MESSAGE(run({name, "--help"}).code == cli::kOk, name);
  }

  CHECK(run({}).code == cli::kValidationFailure);
  CHECK(run({"bogus"}).code == cli::kValidationFailure);
  const auto unknown = run({"asymmetry", "--out", "x.csv", "--frobnicate", "3"});
  CHECK(unknown.code == cli::kValidationFailure);
  CHECK(unknown.err.find("frobnicate") != std::string::npos);
  CHECK(run({"asymmetry", "--model", "hermitian", "--out", "x.csv"}).code == cli::kValidationFailure);
  CHECK(run({"asymmetry", "--points", "many", "--out", "x.csv"}).code == cli::kValidationFailure);
}

TEST_CASE("temporal wave function model needs its variant") {
  const auto dir = test::scratch_dir("cli_variant");
  const auto r = run({"asymmetry", "--model", "twf", "--out", (dir / "a.csv").string()});
  CHECK(r.code == cli::kValidationFailure);
  CHECK(r.err.find("--twf-variant") != std::string::npos);
  CHECK_FALSE(std::filesystem::exists(dir / "a.csv"));
}

TEST_CASE("asymmetry writes a curve and its config echo") {
  const auto dir = test::scratch_dir("cli_asymmetry");
  const auto csv = dir / "curve.csv";
  const auto r = run({"asymmetry", "--model", "wwa", "--t-min", "1", "--t-max", "20", "--points", "200", "--out",
                      csv.string()});
  REQUIRE(r.code == cli::kOk);
  CHECK(line_count(csv) == 201);
  const auto echo = read_json(dir / "curve.csv.json");
  CHECK(echo["t_min"] == 1.0);
  CHECK(echo["t_max"] == 20.0);
  CHECK(echo["points"] == 200);
  CHECK(echo["model"] == "wwa");
  CHECK(echo["physics"]["abs_epsilon"].get<double>() == doctest::Approx(2.228e-3));
  CHECK(nlohmann::json::parse(r.out)["large_t_limit"].get<double>() == doctest::Approx(3.232e-3).epsilon(1e-3));

  const auto twf = run({"asymmetry", "--model", "twf", "--twf-variant", "matched_large_t", "--out",
                        (dir / "twf.csv").string()});
  CHECK(twf.code == cli::kOk);
  CHECK(read_json(dir / "twf.csv.json")["model"] == "twf:matched_large_t");
}

TEST_CASE("physics configuration file") {
  const auto dir = test::scratch_dir("cli_config");
  std::ofstream(dir / "p.cfg") << "use_defaults = true\nabs_epsilon = 0\n";
  const auto r = run({"asymmetry", "--config", (dir / "p.cfg").string(), "--out", (dir / "a.csv").string()});
  REQUIRE(r.code == cli::kOk);
  CHECK(nlohmann::json::parse(r.out)["large_t_limit"].get<double>() == 0.0);

  std::ofstream(dir / "bad.cfg") << "tau_s_seconds = 1e-10\n";
  const auto bad = run({"asymmetry", "--config", (dir / "bad.cfg").string(), "--out", (dir / "b.csv").string()});
  CHECK(bad.code == cli::kValidationFailure);
  CHECK(run({"asymmetry", "--config", (dir / "none.cfg").string(), "--out", (dir / "c.csv").string()}).code ==
        cli::kValidationFailure);
}

TEST_CASE("rates, spectral and golden-rule subcommands") {
  const auto dir = test::scratch_dir("cli_misc");
  CHECK(run({"rates", "--initial", "K0bar", "--channel", "semileptonic_plus", "--points", "11", "--out",
             (dir / "r.csv").string()})
            .code == cli::kOk);
  CHECK(line_count(dir / "r.csv") == 12);
  CHECK(run({"rates", "--initial", "K9", "--out", (dir / "r2.csv").string()}).code == cli::kValidationFailure);

  const auto sp = run({"spectral", "--t-points", "6", "--out", (dir / "s.csv").string()});
  REQUIRE(sp.code == cli::kOk);
  const auto summary = nlohmann::json::parse(sp.out);
  CHECK(summary["max_density_deviation"].get<double>() < 1e-3);
  CHECK(summary["max_survival_deviation"].get<double>() < 1e-3);
  CHECK(line_count(dir / "s.csv") == 7);

  std::ofstream(dir / "g.cfg") << "species = 1\ngamma_1 = 1\n";
  const auto gr = run({"golden-rule", "--scenario", (dir / "g.cfg").string(), "--out", (dir / "g.csv").string()});
  REQUIRE(gr.code == cli::kOk);
  CHECK(nlohmann::json::parse(gr.out)["fitted_gamma_total"].get<double>() == doctest::Approx(1.0).epsilon(0.03));
  CHECK(std::filesystem::exists(dir / "g.csv.json"));
}

TEST_CASE("generate and fit") {
  const auto dir = test::scratch_dir("cli_fit");
  const auto k0 = (dir / "k0.csv").string();
  const auto k0bar = (dir / "k0bar.csv").string();
  REQUIRE(run({"generate", "--n", "300000", "--seed", "3", "--initial", "K0", "--threads", "2", "--out", k0}).code ==
          cli::kOk);
  REQUIRE(run({"generate", "--n", "300000", "--seed", "4", "--initial", "K0bar", "--out", k0bar}).code == cli::kOk);
  const auto echo = read_json(k0 + ".json");
  CHECK(echo["n"] == 300000);
  CHECK(echo["seed"] == 3);
  CHECK(echo["threads"] == 2);
  CHECK(echo["grid_points"] == 10001);

  const auto events = events::read_csv(k0);
  CHECK(events.size() > 140000);

  const auto out = (dir / "fit.json").string();
  const auto r = run({"fit", "--events-k0", k0, "--events-k0bar", k0bar, "--twf-variant", "matched_large_t", "--out",
                      out});
  REQUIRE(r.code == cli::kOk);
  const auto j = read_json(out);
  CHECK(j["config"]["t_lo"] == 1.0);
  CHECK(j["config"]["bin_width"] == 1.0);
  CHECK(j["model_chi2"].contains("wwa"));
  CHECK(j["model_chi2"].contains("twf:matched_large_t"));
  CHECK(std::abs(j["epsilon_hat"]["abs"].get<double>() - 2.228e-3) <
        4.0 * j["abs_epsilon_sigma"].get<double>());

  CHECK(run({"fit", "--events-k0", (dir / "missing.csv").string(), "--events-k0bar", k0bar, "--out", out}).code ==
        cli::kValidationFailure);
  CHECK(run({"generate", "--n", "10", "--t-max", "40", "--out", (dir / "e.csv").string()}).code ==
        cli::kValidationFailure);
}

TEST_CASE("study writes its report directory") {
  const auto dir = test::scratch_dir("cli_study");
  std::ofstream(dir / "study.cfg") << "twf_variant = matched_large_t\nevents_per_flavor = 200000\n";
  const auto run_dir = dir / "run1";
  const auto r = run({"study", "--config", (dir / "study.cfg").string(), "--seed", "42", "--out", run_dir.string()});
  REQUIRE(r.code == cli::kOk);
  for (const char* name : {"report.json", "wwa_curve.csv", "twf_curve.csv", "events_k0.csv", "events_k0bar.csv",
                           "fit.json"}) {
    CHECK_MESSAGE(std::filesystem::exists(run_dir / name), name);
  }
  const auto report = read_json(run_dir / "report.json");
  CHECK(report["config"]["seed"] == "42");
  CHECK(report["verdicts"]["twf"]["verdict"] == "falsified");
  CHECK(report["verdicts"]["wwa"]["verdict"] == "consistent");

  std::ofstream(dir / "no_variant.cfg") << "events_per_flavor = 1000\n";
  const auto missing = run({"study", "--config", (dir / "no_variant.cfg").string(), "--out", run_dir.string()});
  CHECK(missing.code == cli::kValidationFailure);
  CHECK(missing.err.find("twf_variant") != std::string::npos);

  std::ofstream(dir / "short.cfg") << "twf_variant = matched_large_t\nsample_t_max = 40\n";
  const auto stage = run({"study", "--config", (dir / "short.cfg").string(), "--out", (dir / "run2").string()});
  CHECK(stage.code == cli::kRuntimeFailure);
  CHECK(stage.err.find("events") != std::string::npos);
}
