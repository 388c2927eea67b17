#pragma once

/* Key-value run configuration.  The file format is one `key = value` pair per
 * line, `#` starts a comment, blank lines are ignored.  Values stay strings
 * until a typed getter is called, so the CLI can splice overrides in without
 * knowing the key's type.  Typed getters take the default that applies when
 * the key is absent; malformed values throw instead of silently defaulting. */

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace focklab {

class Config {
 public:
  Config() = default;

  static Config from_file(const std::filesystem::path& path);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;

  std::string get(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  // Comma-separated list of numbers, e.g. "100,300,1000".
  std::vector<double> get_list(const std::string& key,
                               std::vector<double> fallback) const;

  std::vector<std::string> keys() const;

 private:
  std::map<std::string, std::string> kv_;
};

}  // namespace focklab
