#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace voldens {

/// Flat `key = value` text. Blank lines and lines starting with '#' are
/// ignored; later duplicates override earlier ones.
class KeyValueConfig
{
public:
  static KeyValueConfig parse(std::istream& in, const std::string& origin = "<input>");
  static KeyValueConfig load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::optional<std::string> raw(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::optional<double> get_optional_double(const std::string& key) const;
  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_double_list(const std::string& key, const std::vector<double>& fallback) const;

  /// Throws ConfigError naming the first key not in `known`.
  void require_known(const std::set<std::string>& known) const;

  const std::map<std::string, std::string>& entries() const noexcept { return values_; }

private:
  std::string origin_;
  std::map<std::string, std::string> values_;
};

/// Parses "1,2.5,3" into doubles; throws ConfigError.
std::vector<double> parse_double_list(const std::string& text);

} // namespace voldens
