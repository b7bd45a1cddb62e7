#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace nlperim::cli {

// Flat section/key=value configuration. Keys are addressed as "section.key".
class Config {
 public:
  static Config parse_file(const std::string& path);
  static Config parse_string(const std::string& text);

  // "section.key=value"; the key must be known.
  void apply_override(const std::string& assignment);

  bool has_section(const std::string& section) const;
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::string get(const std::string& key) const;
  std::string get(const std::string& key, const std::string& fallback) const;
  double number(const std::string& key) const;
  double number(const std::string& key, double fallback) const;
  int integer(const std::string& key, int fallback) const;
  // Whitespace separated numbers.
  std::vector<double> numbers(const std::string& key) const;
  // Rows separated by ';', numbers by whitespace.
  std::vector<std::vector<double>> rows(const std::string& key) const;
  // Throws unless `section` is present; the message names the section.
  void require_section(const std::string& section, const std::string& command) const;

  // Sorted "section.key=value" lines: the canonical text that is hashed.
  std::string canonical() const;

 private:
  void set(const std::string& key, const std::string& value);
  std::map<std::string, std::string> values_;
};

}  // namespace nlperim::cli
