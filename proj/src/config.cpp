#include "velobound/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace velobound {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

[[noreturn]] void parse_fail(const std::string& what, int line) {
  throw ParseError("config line " + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& text, const std::string& where, int line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    parse_fail("value of " + where + " is not a number: '" + text + "'", line);
  }
  if (used != text.size())
    parse_fail("trailing characters in numeric value of " + where + ": '" + text + "'", line);
  return v;
}

}  // namespace

const ConfigEntry* ConfigSection::find(const std::string& key) const {
  for (const auto& e : entries)
    if (e.key == key) return &e;
  return nullptr;
}

std::string ConfigSection::get_string(const std::string& key,
                                      const std::string& fallback) const {
  const ConfigEntry* e = find(key);
  return e ? e->value : fallback;
}

std::string ConfigSection::require_string(const std::string& key) const {
  const ConfigEntry* e = find(key);
  if (!e)
    throw ValidationError("section [" + name + "] is missing required key '" + key + "'");
  return e->value;
}

double ConfigSection::get_double(const std::string& key, double fallback) const {
  const ConfigEntry* e = find(key);
  if (!e) return fallback;
  return parse_double(e->value, "[" + name + "] " + key, e->line);
}

double ConfigSection::require_double(const std::string& key) const {
  const ConfigEntry* e = find(key);
  if (!e)
    throw ValidationError("section [" + name + "] is missing required key '" + key + "'");
  return parse_double(e->value, "[" + name + "] " + key, e->line);
}

long ConfigSection::get_int(const std::string& key, long fallback) const {
  const ConfigEntry* e = find(key);
  if (!e) return fallback;
  const std::string where = "[" + name + "] " + key;
  std::size_t used = 0;
  long v = 0;
  try {
    v = std::stol(e->value, &used);
  } catch (const std::exception&) {
    parse_fail("value of " + where + " is not an integer: '" + e->value + "'", e->line);
  }
  if (used != e->value.size())
    parse_fail("trailing characters in integer value of " + where + ": '" + e->value + "'",
               e->line);
  return v;
}

bool ConfigSection::get_bool(const std::string& key, bool fallback) const {
  const ConfigEntry* e = find(key);
  if (!e) return fallback;
  const std::string v = lower(trim(e->value));
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  parse_fail("value of [" + name + "] " + key + " is not a boolean: '" + e->value + "'",
             e->line);
}

std::vector<double> ConfigSection::get_double_list(const std::string& key) const {
  const ConfigEntry* e = find(key);
  std::vector<double> out;
  if (!e) return out;
  std::stringstream ss(e->value);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    cell = trim(cell);
    if (cell.empty())
      parse_fail("empty element in list value of [" + name + "] " + key, e->line);
    out.push_back(parse_double(cell, "[" + name + "] " + key, e->line));
  }
  if (out.empty())
    parse_fail("empty list value of [" + name + "] " + key, e->line);
  return out;
}

std::vector<std::string> ConfigSection::get_string_list(const std::string& key) const {
  const ConfigEntry* e = find(key);
  std::vector<std::string> out;
  if (!e) return out;
  std::stringstream ss(e->value);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    cell = trim(cell);
    if (!cell.empty()) out.push_back(cell);
  }
  return out;
}

const ConfigSection* ConfigFile::find(const std::string& name) const {
  for (const auto& s : sections)
    if (s.name == name) return &s;
  return nullptr;
}

const ConfigSection& ConfigFile::require(const std::string& name) const {
  const ConfigSection* s = find(name);
  if (!s) throw ValidationError("config is missing required section [" + name + "]");
  return *s;
}

ConfigFile parse_config(const std::string& text) {
  ConfigFile file;
  ConfigSection* current = nullptr;

  std::stringstream ss(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(ss, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const std::string line = trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;

    if (line.front() == '[') {
      if (line.back() != ']') parse_fail("unterminated section header", line_no);
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (name.empty()) parse_fail("empty section name", line_no);
      if (file.find(name)) parse_fail("duplicate section [" + name + "]", line_no);
      file.sections.push_back(ConfigSection{name, line_no, {}});
      current = &file.sections.back();
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      parse_fail("expected 'key = value' or '[section]': '" + line + "'", line_no);
    if (!current) parse_fail("entry before the first section header", line_no);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) parse_fail("empty key", line_no);
    if (current->find(key))
      parse_fail("duplicate key '" + key + "' in section [" + current->name + "]", line_no);
    current->entries.push_back(ConfigEntry{key, value, line_no});
  }
  return file;
}

ConfigFile read_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace velobound
