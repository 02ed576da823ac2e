#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace xmodal {

// Flat `key = value` config file. '#' starts a comment; keys may repeat
// (list-valued entries such as `dataset`). Consumers declare their schema
// up front and any undeclared key is a hard error naming the offenders.
class ConfigFile {
 public:
  static ConfigFile parse_file(const std::string& path);
  static ConfigFile parse_text(const std::string& text, const std::string& origin = "<inline>");

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key) const;
  std::string get_string_or(const std::string& key, const std::string& fallback) const;
  int64_t get_int(const std::string& key) const;
  int64_t get_int_or(const std::string& key, int64_t fallback) const;
  double get_real(const std::string& key) const;
  double get_real_or(const std::string& key, double fallback) const;
  bool get_bool_or(const std::string& key, bool fallback) const;
  std::vector<std::string> get_all(const std::string& key) const;

  // Throws std::runtime_error listing every key not in `allowed`.
  void require_known_keys(const std::vector<std::string>& allowed) const;

  const std::string& origin() const { return origin_; }
  std::string canonical_text() const;  // sorted key=value lines, for hashing

 private:
  std::string origin_;
  std::vector<std::pair<std::string, std::string>> entries_;
};

std::vector<std::string> split(const std::string& text, char sep);
std::string trim(const std::string& text);

}  // namespace xmodal
