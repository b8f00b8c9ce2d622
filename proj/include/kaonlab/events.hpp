#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "kaonlab/model.hpp"
#include "kaonlab/params.hpp"
#include "kaonlab/types.hpp"

/// Monte Carlo decay-time and channel generation by tabulated inverse CDF.
namespace kaonlab::events {

struct DecayEvent {
  double time = 0.0;  ///< units of tau_S
  Channel channel = Channel::TwoPion;
  Flavor initial = Flavor::K0;

  friend bool operator==(const DecayEvent&, const DecayEvent&) = default;
};

struct SamplerOptions {
  double t_max = 1000.0;  ///< window end, units of tau_S; at least 40
  /// Grid nodes on [0, t_max]; the default puts nodes on every multiple of 0.1.
  int grid_points = 10001;
  std::vector<Channel> channels{Channel::TwoPion};
  int threads = 1;
  double max_tail_mass = 1e-3;
};

/// Tabulated cumulative distribution of the summed channel rates on a uniform
/// grid over [0, t_max], normalized over the window.
class TimeSampler {
public:
  TimeSampler(const DecayModel& model, Flavor initial, const SamplerOptions& options);

  /// Inverse CDF with linear interpolation between grid nodes; u in [0, 1].
  double time_at(double u) const;
  /// Tabulated CDF at t (linear interpolation), 1 beyond t_max.
  double cdf(double t) const;
  /// Channel drawn with probability proportional to its integrated rate over
  /// the grid cell containing t; u in [0, 1).
  Channel channel_at(double t, double u) const;

  /// Decay probability per prepared kaon into the selected channels within [0, t_max].
  double window_mass() const { return window_mass_; }
  /// Fraction of the total decay probability beyond t_max.
  double tail_fraction() const { return tail_fraction_; }

private:
  std::size_t cell_of(double t) const;

  const DecayModel* model_;
  Flavor initial_;
  std::vector<Channel> channels_;
  std::vector<double> grid_;
  std::vector<double> cdf_;
  std::vector<double> cell_channel_cdf_;  ///< cells x channels, cumulative within each cell
  double window_mass_ = 0.0;
  double tail_fraction_ = 0.0;
};

/// Decays of n kaons prepared in `initial`. Each kaon decays through one of the
/// selected channels inside [0, t_max] with probability window_mass(), so the
/// list holds a Binomial(n, window_mass) number of events; K0 and K0bar samples
/// with equal n therefore carry the physical flavor asymmetry in their counts.
/// Deterministic in `seed` and independent of options.threads: events are
/// generated in fixed-size streams with derived sub-seeds, then sorted by time.
/// Throws ConfigError when the probability beyond t_max exceeds
/// options.max_tail_mass.
std::vector<DecayEvent> sample(const Model& model, Flavor initial, long long n, std::uint64_t seed,
                               const KaonPhysics& physics, const SamplerOptions& options = {});

/// Per-bin counts and asymmetry (N_K0bar - N_K0) / (N_K0bar + N_K0) of one channel.
struct BinnedAsymmetry {
  std::vector<double> bin_edges;
  std::vector<double> values;
  std::vector<double> sigma;
  std::vector<long long> counts_k0;
  std::vector<long long> counts_k0bar;
  std::vector<bool> valid;  ///< false for bins without any event

  std::size_t bins() const { return values.size(); }
  std::size_t valid_bins() const;
};

/// Bin edges lo, lo + width, ..., hi.
std::vector<double> uniform_edges(double lo, double hi, double width);

/// Binomial uncertainty of 2p - 1 evaluated at p = 1/2, sigma = 1 / sqrt(N), so
/// it depends on the bin total only and not on the observed split.
BinnedAsymmetry bin_asymmetry(std::span<const DecayEvent> k0, std::span<const DecayEvent> k0bar,
                              std::span<const double> bin_edges, Channel channel = Channel::TwoPion);

/// `time_over_tau_s,channel,initial_flavor`
std::string to_csv(std::span<const DecayEvent> events);
std::vector<DecayEvent> read_csv(const std::filesystem::path& path);

/// Configuration echo written next to an event file.
nlohmann::json sidecar(const Model& model, Flavor initial, long long n, std::uint64_t seed,
                       const KaonPhysics& physics, const SamplerOptions& options);

nlohmann::json to_json(const BinnedAsymmetry& b);

}  // namespace kaonlab::events
