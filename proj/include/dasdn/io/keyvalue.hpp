#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace dasdn::io {

struct KeyValue {
  std::string key;
  std::string value;
  int line = 0;
};

struct Section {
  std::string name;  // empty for entries before the first [header]
  std::vector<KeyValue> entries;
  int line = 0;
};

/// Parses INI-like text: `[section]` headers, `key = value` lines, `#` or `;`
/// comments, blank lines ignored. Sections may repeat; order is preserved.
std::vector<Section> parse_sections(const std::string& text, const std::string& context);
std::vector<Section> load_sections(const std::filesystem::path& path);

double parse_double(const KeyValue& kv, const std::string& context);
long long parse_int(const KeyValue& kv, const std::string& context);

}  // namespace dasdn::io
