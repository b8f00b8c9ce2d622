#include "kaonlab/events.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include "kaonlab/errors.hpp"
#include "kaonlab/grid.hpp"
#include "kaonlab/io.hpp"
#include "kaonlab/quadrature.hpp"

namespace kaonlab::events {
namespace {

constexpr long long kStreamSize = 1 << 16;

const quad::GaussLegendre<double>& cell_rule() {
  static const quad::GaussLegendre<double> rule(6);
  return rule;
}

std::mt19937_64 stream_engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

TimeSampler::TimeSampler(const DecayModel& model, Flavor initial, const SamplerOptions& options)
    : model_(&model), initial_(initial), channels_(options.channels) {
  if (channels_.empty()) throw ConfigError("channels", "at least one channel is required");
  if (!(options.t_max >= 40.0)) throw ConfigError("t_max", "must be at least 40 tau_S");
  if (options.grid_points < 2) throw ConfigError("grid_points", "must be at least 2");

  grid_ = uniform_grid(0.0, options.t_max, options.grid_points);
  const std::size_t cells = grid_.size() - 1;
  const std::size_t nch = channels_.size();
  cdf_.assign(grid_.size(), 0.0);
  cell_channel_cdf_.assign(cells * nch, 0.0);
  for (std::size_t i = 0; i < cells; ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < nch; ++c) {
      acc += cell_rule().integrate([&](double t) { return model_->rate(channels_[c], initial_, t); }, grid_[i],
                                   grid_[i + 1]);
      cell_channel_cdf_[i * nch + c] = acc;
    }
    for (std::size_t c = 0; c < nch; ++c) cell_channel_cdf_[i * nch + c] = acc > 0.0 ? cell_channel_cdf_[i * nch + c] / acc : 1.0;
    cdf_[i + 1] = cdf_[i] + acc;
  }
  window_mass_ = cdf_.back();
  if (!(window_mass_ > 0.0)) throw ConfigError("channels", "selected channels have zero rate");

  // Tail beyond t_max: 60 lifetimes of the slowest component, panels of ~1 tau_S
  // near t_max where the short-lived part may still oscillate, coarser later.
  auto total = [&](double t) { return model_->total_rate(channels_, initial_, t); };
  const double gamma_min = model_->constants().gamma_l;
  const double near_end = options.t_max + 200.0;
  const double far_end = options.t_max + 60.0 / gamma_min;
  double tail = cell_rule().integrate(total, options.t_max, near_end, 200);
  if (far_end > near_end) {
    tail += cell_rule().integrate(total, near_end, far_end, std::max(1, static_cast<int>((far_end - near_end) / 20.0)));
  }
  tail_fraction_ = tail / (window_mass_ + tail);
  if (tail_fraction_ > options.max_tail_mass) {
    throw ConfigError("t_max", "decay probability beyond t_max is " + format_number(tail_fraction_) +
                                   ", above the allowed " + format_number(options.max_tail_mass));
  }
  for (double& c : cdf_) c /= window_mass_;
  cdf_.back() = 1.0;
}

double TimeSampler::time_at(double u) const {
  u = std::clamp(u, 0.0, 1.0);
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) return grid_.back();
  const std::size_t hi = static_cast<std::size_t>(it - cdf_.begin());
  const std::size_t lo = hi - 1;
  const double width = cdf_[hi] - cdf_[lo];
  const double frac = width > 0.0 ? (u - cdf_[lo]) / width : 0.0;
  return grid_[lo] + frac * (grid_[hi] - grid_[lo]);
}

double TimeSampler::cdf(double t) const {
  if (t <= 0.0) return 0.0;
  if (t >= grid_.back()) return 1.0;
  const std::size_t lo = cell_of(t);
  const double frac = (t - grid_[lo]) / (grid_[lo + 1] - grid_[lo]);
  return cdf_[lo] + frac * (cdf_[lo + 1] - cdf_[lo]);
}

std::size_t TimeSampler::cell_of(double t) const {
  const double step = grid_[1] - grid_[0];
  const double pos = std::clamp(t, 0.0, grid_.back()) / step;
  return std::min(static_cast<std::size_t>(pos), grid_.size() - 2);
}

Channel TimeSampler::channel_at(double t, double u) const {
  const std::size_t nch = channels_.size();
  if (nch == 1) return channels_.front();
  const std::size_t cell = cell_of(t);
  for (std::size_t c = 0; c < nch; ++c) {
    if (u < cell_channel_cdf_[cell * nch + c]) return channels_[c];
  }
  return channels_.back();
}

std::vector<DecayEvent> sample(const Model& model, Flavor initial, long long n, std::uint64_t seed,
                               const KaonPhysics& physics, const SamplerOptions& options) {
  if (n < 1) throw ConfigError("n", "must be at least 1");
  const DecayModel bound(model, physics);
  const TimeSampler sampler(bound, initial, options);

  std::mt19937_64 count_engine = stream_engine(seed, ~std::uint64_t{0});
  std::binomial_distribution<long long> decays(n, std::min(1.0, sampler.window_mass()));
  const long long count = decays(count_engine);

  std::vector<DecayEvent> events(static_cast<std::size_t>(count));
  const long long streams = (count + kStreamSize - 1) / kStreamSize;
  auto run_stream = [&](long long s) {
    std::mt19937_64 engine = stream_engine(seed, static_cast<std::uint64_t>(s));
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const long long begin = s * kStreamSize;
    const long long end = std::min(count, begin + kStreamSize);
    for (long long i = begin; i < end; ++i) {
      const double t = sampler.time_at(uniform(engine));
      const Channel c = sampler.channel_at(t, uniform(engine));
      events[static_cast<std::size_t>(i)] = {t, c, initial};
    }
  };

  const long long workers = std::clamp<long long>(options.threads, 1, std::max(streams, 1LL));
  if (workers == 1) {
    for (long long s = 0; s < streams; ++s) run_stream(s);
  } else {
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    {
      std::vector<std::jthread> pool;
      for (long long w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
          try {
            for (long long s = w; s < streams; s += workers) run_stream(s);
          } catch (...) {
            errors[static_cast<std::size_t>(w)] = std::current_exception();
          }
        });
      }
    }
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const DecayEvent& a, const DecayEvent& b) { return a.time < b.time; });
  return events;
}

std::size_t BinnedAsymmetry::valid_bins() const {
  return static_cast<std::size_t>(std::count(valid.begin(), valid.end(), true));
}

std::vector<double> uniform_edges(double lo, double hi, double width) {
  if (!(width > 0.0) || !(hi > lo)) throw ConfigError("bin_width", "need hi > lo and a positive bin width");
  const double count = (hi - lo) / width;
  const long long bins = std::llround(count);
  if (bins < 1 || std::abs(count - static_cast<double>(bins)) > 1e-9 * count) {
    throw ConfigError("bin_width", "window length must be a whole number of bins");
  }
  std::vector<double> edges(static_cast<std::size_t>(bins + 1));
  for (long long i = 0; i <= bins; ++i) edges[static_cast<std::size_t>(i)] = lo + width * static_cast<double>(i);
  edges.back() = hi;
  return edges;
}

BinnedAsymmetry bin_asymmetry(std::span<const DecayEvent> k0, std::span<const DecayEvent> k0bar,
                              std::span<const double> bin_edges, Channel channel) {
  if (bin_edges.size() < 2) throw ValidationError("need at least one bin");
  for (std::size_t i = 1; i < bin_edges.size(); ++i) {
    if (!(bin_edges[i] > bin_edges[i - 1])) throw ValidationError("bin edges must be strictly increasing");
  }
  const std::size_t bins = bin_edges.size() - 1;
  BinnedAsymmetry out;
  out.bin_edges.assign(bin_edges.begin(), bin_edges.end());
  out.counts_k0.assign(bins, 0);
  out.counts_k0bar.assign(bins, 0);

  auto fill = [&](std::span<const DecayEvent> events, std::vector<long long>& counts) {
    for (const auto& e : events) {
      if (e.channel != channel || e.time < bin_edges.front() || e.time >= bin_edges.back()) continue;
      const auto it = std::upper_bound(bin_edges.begin(), bin_edges.end(), e.time);
      ++counts[static_cast<std::size_t>(it - bin_edges.begin()) - 1];
    }
  };
  fill(k0, out.counts_k0);
  fill(k0bar, out.counts_k0bar);

  out.values.assign(bins, 0.0);
  out.sigma.assign(bins, 0.0);
  out.valid.assign(bins, false);
  for (std::size_t b = 0; b < bins; ++b) {
    const double n = static_cast<double>(out.counts_k0[b]);
    const double nbar = static_cast<double>(out.counts_k0bar[b]);
    const double total = n + nbar;
    if (total == 0.0) continue;
    out.valid[b] = true;
    out.values[b] = (nbar - n) / total;
    // A = 2p - 1 with p binomial; sigma taken at p = 1/2.
    out.sigma[b] = 1.0 / std::sqrt(total);
  }
  return out;
}

std::string to_csv(std::span<const DecayEvent> events) {
  std::ostringstream out;
  out << "time_over_tau_s,channel,initial_flavor\n";
  for (const auto& e : events) {
    out << format_number(e.time) << ',' << to_string(e.channel) << ',' << to_string(e.initial) << '\n';
  }
  return out.str();
}

std::vector<DecayEvent> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("events", "cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || line.rfind("time_over_tau_s,channel,initial_flavor", 0) != 0) {
    throw ConfigError("events", "'" + path.string() + "' lacks the event CSV header");
  }
  std::vector<DecayEvent> events;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string time, channel, flavor;
    if (!std::getline(row, time, ',') || !std::getline(row, channel, ',') || !std::getline(row, flavor)) {
      throw ConfigError("events", "malformed row '" + line + "'");
    }
    DecayEvent e;
    try {
      std::size_t used = 0;
      e.time = std::stod(time, &used);
      if (used != time.size()) throw std::invalid_argument(time);
    } catch (const std::exception&) {
      throw ConfigError("events", "malformed time '" + time + "'");
    }
    if (!flavor.empty() && flavor.back() == '\r') flavor.pop_back();
    e.channel = parse_channel(channel);
    e.initial = parse_flavor(flavor);
    events.push_back(e);
  }
  return events;
}

nlohmann::json sidecar(const Model& model, Flavor initial, long long n, std::uint64_t seed,
                       const KaonPhysics& physics, const SamplerOptions& options) {
  nlohmann::json channels = nlohmann::json::array();
  for (Channel c : options.channels) channels.push_back(std::string(to_string(c)));
  nlohmann::json phys = nlohmann::json::object();
  const KeyValues physics_kv = to_key_values(physics);
  for (const auto& [k, v] : physics_kv.entries()) phys[k] = std::stod(v);
  return {{"model", to_string(model)},
          {"initial", std::string(to_string(initial))},
          {"n", n},
          {"seed", seed},
          {"t_max", options.t_max},
          {"grid_points", options.grid_points},
          {"channels", channels},
          {"max_tail_mass", options.max_tail_mass},
          {"physics", phys}};
}

nlohmann::json to_json(const BinnedAsymmetry& b) {
  return {{"bin_edges", b.bin_edges}, {"values", b.values},         {"sigma", b.sigma},
          {"counts_k0", b.counts_k0}, {"counts_k0bar", b.counts_k0bar}, {"valid", b.valid}};
}

}  // namespace kaonlab::events
