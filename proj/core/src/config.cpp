#include "ephx/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "ephx/errors.hpp"

namespace ephx {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

}  // namespace

ConfigFile ConfigFile::parse(const std::string& text) {
  ConfigFile cfg;
  std::istringstream in(text);
  std::string raw, section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    auto hash = raw.find('#');
    std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError("unterminated section header", line);
      section = trim(s.substr(1, s.size() - 2));
      if (!valid_name(section)) throw ConfigError("bad section name '" + section + "'", line);
      if (cfg.data_.count(section)) throw ConfigError("duplicate section [" + section + "]", line);
      cfg.data_[section];
      cfg.section_lines_[section] = line;
      continue;
    }
    auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line);
    if (section.empty()) throw ConfigError("key outside of any section", line);
    std::string key = trim(s.substr(0, eq)), value = trim(s.substr(eq + 1));
    if (!valid_name(key)) throw ConfigError("bad key '" + key + "'", line);
    if (value.empty()) throw ConfigError("empty value for '" + key + "'", line);
    auto& sec = cfg.data_[section];
    if (sec.count(key)) throw ConfigError("duplicate key '" + key + "' in [" + section + "]", line);
    sec[key] = {value, line};
  }
  return cfg;
}

ConfigFile ConfigFile::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

bool ConfigFile::has(const std::string& section, const std::string& key) const { return find(section, key) != nullptr; }

const ConfigFile::Entry* ConfigFile::find(const std::string& section, const std::string& key) const {
  auto s = data_.find(section);
  if (s == data_.end()) return nullptr;
  auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

std::vector<std::string> ConfigFile::sections() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : data_) out.push_back(name);
  return out;
}

int ConfigFile::section_line(const std::string& name) const {
  auto s = section_lines_.find(name);
  return s == section_lines_.end() ? 0 : s->second;
}

const std::map<std::string, ConfigFile::Entry>& ConfigFile::section(const std::string& name) const {
  static const std::map<std::string, Entry> empty;
  auto s = data_.find(name);
  return s == data_.end() ? empty : s->second;
}

void ConfigFile::set(const std::string& section, const std::string& key, const std::string& value) {
  data_[section][key] = {value, 0};
}

}  // namespace ephx
