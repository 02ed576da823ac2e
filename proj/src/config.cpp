#include "xmodal/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace xmodal {

std::string trim(const std::string& text) {
  size_t b = text.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = text.find_last_not_of(" \t\r\n");
  return text.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (c == sep) {
      parts.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  parts.push_back(current);
  return parts;
}

ConfigFile ConfigFile::parse_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("config: cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << is.rdbuf();
  return parse_text(buffer.str(), path);
}

ConfigFile ConfigFile::parse_text(const std::string& text, const std::string& origin) {
  ConfigFile cfg;
  cfg.origin_ = origin;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config: " + origin + ":" + std::to_string(lineno) +
                               ": expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error("config: " + origin + ":" + std::to_string(lineno) + ": empty key");
    cfg.entries_.emplace_back(key, value);
  }
  return cfg;
}

bool ConfigFile::has(const std::string& key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return true;
  return false;
}

std::string ConfigFile::get_string(const std::string& key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return v;
  throw std::runtime_error("config: " + origin_ + ": missing required key '" + key + "'");
}

std::string ConfigFile::get_string_or(const std::string& key, const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

int64_t ConfigFile::get_int(const std::string& key) const {
  const std::string v = get_string(key);
  size_t pos = 0;
  int64_t value = 0;
  try {
    value = std::stoll(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size())
    throw std::runtime_error("config: " + origin_ + ": key '" + key + "' is not an integer: '" +
                             v + "'");
  return value;
}

int64_t ConfigFile::get_int_or(const std::string& key, int64_t fallback) const {
  return has(key) ? get_int(key) : fallback;
}

double ConfigFile::get_real(const std::string& key) const {
  const std::string v = get_string(key);
  size_t pos = 0;
  double value = 0;
  try {
    value = std::stod(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size())
    throw std::runtime_error("config: " + origin_ + ": key '" + key + "' is not a number: '" + v +
                             "'");
  return value;
}

double ConfigFile::get_real_or(const std::string& key, double fallback) const {
  return has(key) ? get_real(key) : fallback;
}

bool ConfigFile::get_bool_or(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string v = get_string(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw std::runtime_error("config: " + origin_ + ": key '" + key + "' is not a boolean: '" + v +
                           "'");
}

std::vector<std::string> ConfigFile::get_all(const std::string& key) const {
  std::vector<std::string> out;
  for (const auto& [k, v] : entries_)
    if (k == key) out.push_back(v);
  return out;
}

void ConfigFile::require_known_keys(const std::vector<std::string>& allowed) const {
  std::set<std::string> allowed_set(allowed.begin(), allowed.end());
  std::vector<std::string> unknown;
  for (const auto& [k, v] : entries_)
    if (!allowed_set.count(k) &&
        std::find(unknown.begin(), unknown.end(), k) == unknown.end())
      unknown.push_back(k);
  if (!unknown.empty()) {
    std::string msg = "config: " + origin_ + ": unknown key(s):";
    for (const std::string& k : unknown) msg += " '" + k + "'";
    throw std::runtime_error(msg);
  }
}

std::string ConfigFile::canonical_text() const {
  std::vector<std::string> lines;
  for (const auto& [k, v] : entries_) lines.push_back(k + "=" + v);
  std::stable_sort(lines.begin(), lines.end());
  std::string out;
  for (const std::string& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

}  // namespace xmodal
