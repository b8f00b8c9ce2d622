#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace kaonlab {

/// Flat `key = value` document. Lines starting with '#' and blank lines are
/// ignored; keys keep file order. Duplicate keys are a ConfigError.
class KeyValues {
public:
  KeyValues() = default;

  static KeyValues parse(std::istream& in);
  static KeyValues parse_file(const std::filesystem::path& path);

  bool empty() const { return entries_.empty(); }
  bool contains(const std::string& key) const;
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  void set(const std::string& key, std::string value);
  std::optional<std::string> find(const std::string& key) const;

  double get_double(const std::string& key) const;
  long long get_int(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  std::string get_string(const std::string& key) const;

  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;

  /// ConfigError naming the first key not in `allowed`.
  void reject_unknown(std::span<const std::string> allowed) const;

  std::string to_string() const;

private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// %.12g rendering used by every CSV writer.
std::string format_number(double value);

/// Writes `contents` to `path`, creating parent directories. Throws Error on failure.
void write_text_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace kaonlab
