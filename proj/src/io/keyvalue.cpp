#include "dasdn/io/keyvalue.hpp"

#include <charconv>
#include <sstream>

#include "dasdn/error.hpp"
#include "dasdn/io/binary.hpp"

namespace dasdn::io {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<Section> parse_sections(const std::string& text, const std::string& context) {
  std::vector<Section> out;
  out.push_back({"", {}, 0});
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto c = raw.find_first_of("#;"); c != std::string::npos) raw.erase(c);
    const std::string s = trim(raw);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw FormatError(context + ":" + std::to_string(line) + ": malformed section header");
      out.push_back({trim(s.substr(1, s.size() - 2)), {}, line});
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw FormatError(context + ":" + std::to_string(line) + ": expected key = value");
    const std::string key = trim(s.substr(0, eq));
    if (key.empty()) throw FormatError(context + ":" + std::to_string(line) + ": empty key");
    out.back().entries.push_back({key, trim(s.substr(eq + 1)), line});
  }
  if (out.front().entries.empty()) out.erase(out.begin());
  return out;
}

std::vector<Section> load_sections(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  return parse_sections(std::string(bytes.begin(), bytes.end()), path.string());
}

double parse_double(const KeyValue& kv, const std::string& context) {
  double v = 0.0;
  const auto* end = kv.value.data() + kv.value.size();
  const auto [ptr, ec] = std::from_chars(kv.value.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw FormatError(context + ":" + std::to_string(kv.line) + ": '" + kv.key + "' expects a number, got '" +
                      kv.value + "'");
  }
  return v;
}

long long parse_int(const KeyValue& kv, const std::string& context) {
  long long v = 0;
  const auto* end = kv.value.data() + kv.value.size();
  const auto [ptr, ec] = std::from_chars(kv.value.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw FormatError(context + ":" + std::to_string(kv.line) + ": '" + kv.key + "' expects an integer, got '" +
                      kv.value + "'");
  }
  return v;
}

}  // namespace dasdn::io
