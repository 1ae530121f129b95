#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pehfd {

// Shortest round-trip decimal representation; stable across runs.
std::string format_double(double v);

// Fixed-point with `digits` decimals.
std::string format_fixed(double v, int digits);

std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

double parse_double(std::string_view s, const std::string& what);
std::int64_t parse_int(std::string_view s, const std::string& what);
bool parse_bool(std::string_view s, const std::string& what);
std::vector<double> parse_double_list(std::string_view s, const std::string& what);

// Flat `key = value` text with `#` comments. Later keys override earlier ones.
// A line of the form `[name]` starts a new section; keys before the first
// section header belong to section "".
struct KeyValueSection {
  std::string name;
  std::map<std::string, std::string> values;
  std::map<std::string, int> lines;
};

std::vector<KeyValueSection> parse_key_value_text(std::string_view text,
                                                  const std::string& source);
std::vector<KeyValueSection> load_key_value_file(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

}  // namespace pehfd
