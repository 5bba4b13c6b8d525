#include "voldens/config.hpp"

#include "voldens/errors.hpp"

#include <fstream>
#include <sstream>

namespace voldens {

namespace {

std::string
trim(const std::string& s)
{
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double
to_double(const std::string& text, const std::string& what)
{
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size())
    throw ConfigError("invalid number '" + text + "' for " + what);
  return v;
}

} // namespace

KeyValueConfig
KeyValueConfig::parse(std::istream& in, const std::string& origin)
{
  KeyValueConfig cfg;
  cfg.origin_ = origin;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#')
      continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(t.substr(0, eq));
    if (key.empty())
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
    cfg.values_[key] = trim(t.substr(eq + 1));
  }
  return cfg;
}

KeyValueConfig
KeyValueConfig::load(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config file " + path.string());
  return parse(in, path.string());
}

std::optional<std::string>
KeyValueConfig::raw(const std::string& key) const
{
  const auto it = values_.find(key);
  if (it == values_.end())
    return std::nullopt;
  return it->second;
}

std::string
KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const
{
  return raw(key).value_or(fallback);
}

double
KeyValueConfig::get_double(const std::string& key, double fallback) const
{
  const auto v = raw(key);
  return v ? to_double(*v, origin_ + " key '" + key + "'") : fallback;
}

std::optional<double>
KeyValueConfig::get_optional_double(const std::string& key) const
{
  const auto v = raw(key);
  if (!v || v->empty() || *v == "none")
    return std::nullopt;
  return to_double(*v, origin_ + " key '" + key + "'");
}

std::uint64_t
KeyValueConfig::get_uint(const std::string& key, std::uint64_t fallback) const
{
  const auto v = raw(key);
  if (!v)
    return fallback;
  std::size_t used = 0;
  std::uint64_t out = 0;
  try {
    out = std::stoull(*v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != v->size() || (*v)[0] == '-')
    throw ConfigError("invalid unsigned integer '" + *v + "' for " + origin_ + " key '" + key + "'");
  return out;
}

bool
KeyValueConfig::get_bool(const std::string& key, bool fallback) const
{
  const auto v = raw(key);
  if (!v)
    return fallback;
  if (*v == "1" || *v == "true" || *v == "yes")
    return true;
  if (*v == "0" || *v == "false" || *v == "no")
    return false;
  throw ConfigError("invalid boolean '" + *v + "' for key '" + key + "'");
}

std::vector<double>
KeyValueConfig::get_double_list(const std::string& key, const std::vector<double>& fallback) const
{
  const auto v = raw(key);
  return v ? parse_double_list(*v) : fallback;
}

void
KeyValueConfig::require_known(const std::set<std::string>& known) const
{
  for (const auto& [key, value] : values_)
    if (!known.count(key))
      throw ConfigError(origin_ + ": unknown key '" + key + "'");
}

std::vector<double>
parse_double_list(const std::string& text)
{
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(to_double(trim(item), "list '" + text + "'"));
  if (out.empty())
    throw ConfigError("empty list");
  return out;
}

} // namespace voldens
