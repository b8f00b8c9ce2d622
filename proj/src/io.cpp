#include "kaonlab/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "kaonlab/errors.hpp"
#include "kaonlab/types.hpp"

namespace kaonlab {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

}  // namespace

KeyValues KeyValues::parse(std::istream& in) {
  KeyValues kv;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("", "line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    std::string key = trim(std::string_view(body).substr(0, eq));
    std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) throw ConfigError("", "line " + std::to_string(line_no) + ": empty key");
    if (kv.contains(key)) throw ConfigError(key, "duplicate key");
    kv.entries_.emplace_back(std::move(key), std::move(value));
  }
  return kv;
}

KeyValues KeyValues::parse_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open configuration file '" + path.string() + "'");
  return parse(in);
}

bool KeyValues::contains(const std::string& key) const { return find(key).has_value(); }

void KeyValues::set(const std::string& key, std::string value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = std::move(value);
      return;
    }
  }
  entries_.emplace_back(key, std::move(value));
}

std::optional<std::string> KeyValues::find(const std::string& key) const {
  for (const auto& [k, v] : entries_) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::string KeyValues::get_string(const std::string& key) const {
  auto v = find(key);
  if (!v) throw ConfigError(key, "missing required field");
  return *v;
}

double KeyValues::get_double(const std::string& key) const {
  const std::string text = get_string(key);
  double value = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw ConfigError(key, "expected a number, got '" + text + "'");
  return value;
}

long long KeyValues::get_int(const std::string& key) const {
  const std::string text = get_string(key);
  long long value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) throw ConfigError(key, "expected an integer, got '" + text + "'");
  return value;
}

bool KeyValues::get_bool(const std::string& key) const {
  const std::string text = get_string(key);
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(key, "expected a boolean, got '" + text + "'");
}

double KeyValues::get_double(const std::string& key, double fallback) const {
  return contains(key) ? get_double(key) : fallback;
}

long long KeyValues::get_int(const std::string& key, long long fallback) const {
  return contains(key) ? get_int(key) : fallback;
}

std::string KeyValues::get_string(const std::string& key, const std::string& fallback) const {
  return contains(key) ? get_string(key) : fallback;
}

void KeyValues::reject_unknown(std::span<const std::string> allowed) const {
  for (const auto& [k, v] : entries_) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
      throw ConfigError(k, "unknown configuration key");
    }
  }
}

std::string KeyValues::to_string() const {
  std::ostringstream out;
  for (const auto& [k, v] : entries_) out << k << " = " << v << '\n';
  return out.str();
}

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw Error("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out << contents;
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

std::string_view to_string(Flavor f) {
  switch (f) {
    case Flavor::K0: return "K0";
    case Flavor::K0bar: return "K0bar";
    case Flavor::K1: return "K1";
    case Flavor::K2: return "K2";
    case Flavor::KS: return "KS";
    case Flavor::KL: return "KL";
  }
  return "?";
}

std::string_view to_string(Channel c) {
  switch (c) {
    case Channel::TwoPion: return "two_pion";
    case Channel::ThreePion: return "three_pion";
    case Channel::SemileptonicPlus: return "semileptonic_plus";
    case Channel::SemileptonicMinus: return "semileptonic_minus";
  }
  return "?";
}

Flavor parse_flavor(std::string_view name) {
  for (Flavor f : {Flavor::K0, Flavor::K0bar, Flavor::K1, Flavor::K2, Flavor::KS, Flavor::KL}) {
    if (to_string(f) == name) return f;
  }
  throw ConfigError("initial", "unknown flavor '" + std::string(name) + "' (K0, K0bar, K1, K2, KS, KL)");
}

Channel parse_channel(std::string_view name) {
  for (Channel c : kAllChannels) {
    if (to_string(c) == name) return c;
  }
  throw ConfigError("channel", "unknown channel '" + std::string(name) +
                                   "' (two_pion, three_pion, semileptonic_plus, semileptonic_minus)");
}

}  // namespace kaonlab
