#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace velobound {

// Malformed config text or unparseable values: runner exit code 2.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Well-formed config describing an invalid setup: runner exit code 3.
// Library preconditions throw std::invalid_argument and are mapped the same
// way; this type exists for violations only the config layer can see
// (missing sections, unknown kinds).
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigEntry {
  std::string key;
  std::string value;
  int line = 0;
};

// One [name] block of key=value entries.  Typed accessors convert on demand:
// conversion failures are ParseErrors (the text is malformed), missing
// required keys are ValidationErrors (the setup is incomplete), both naming
// the section, key, and line.
struct ConfigSection {
  std::string name;
  int line = 0;
  std::vector<ConfigEntry> entries;

  const ConfigEntry* find(const std::string& key) const;
  bool has(const std::string& key) const { return find(key) != nullptr; }

  std::string get_string(const std::string& key, const std::string& fallback = "") const;
  std::string require_string(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  double require_double(const std::string& key) const;
  long get_int(const std::string& key, long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  // Comma-separated doubles; empty vector when the key is absent.
  std::vector<double> get_double_list(const std::string& key) const;
  // Comma-separated tokens, trimmed; empty vector when the key is absent.
  std::vector<std::string> get_string_list(const std::string& key) const;
};

struct ConfigFile {
  std::vector<ConfigSection> sections;

  const ConfigSection* find(const std::string& name) const;
  const ConfigSection& require(const std::string& name) const;
};

// Flat INI dialect: [section] headers, key = value entries, full-line
// comments starting with '#' or ';', blank lines ignored.  Duplicate section
// names and duplicate keys within a section are ParseErrors, as are entries
// before the first header.
ConfigFile parse_config(const std::string& text);
ConfigFile read_config_file(const std::string& path);

}  // namespace velobound
