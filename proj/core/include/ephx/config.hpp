#pragma once

#include <map>
#include <string>
#include <vector>

namespace ephx {

// Sectioned "key = value" text. Comments start with '#', sections with "[name]".
class ConfigFile {
public:
  struct Entry {
    std::string value;
    int line = 0;
  };

  static ConfigFile parse(const std::string& text);
  static ConfigFile load(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;
  const Entry* find(const std::string& section, const std::string& key) const;
  std::vector<std::string> sections() const;
  int section_line(const std::string& name) const;  // 0 when absent
  const std::map<std::string, Entry>& section(const std::string& name) const;
  // Adds or replaces a value (command-line overrides); line 0 marks a synthetic entry.
  void set(const std::string& section, const std::string& key, const std::string& value);

private:
  std::map<std::string, std::map<std::string, Entry>> data_;
  std::map<std::string, int> section_lines_;
};

}  // namespace ephx
