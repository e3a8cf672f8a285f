// Copyright 2026 The biosim Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "biosim/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

#include <fmt/format.h>

namespace biosim {

ConfigError::ConfigError(const std::string& what, int line, int column)
    : std::runtime_error(line > 0 ? fmt::format("line {}, column {}: {}", line, column, what)
                                  : what),
      line_(line),
      column_(column) {}

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool is_name_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
         c == '-';
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && text.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || first == last) {
    throw ConfigError(fmt::format("parameter '{}': cannot read '{}' as a number", key, text));
  }
  return value;
}

}  // namespace

double ParamSet::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_number<double>(key, it->second);
}

std::int64_t ParamSet::get_int(const std::string& key, std::int64_t fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_number<std::int64_t>(key, it->second);
}

std::uint64_t ParamSet::get_uint(const std::string& key, std::uint64_t fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (!it->second.empty() && it->second.front() == '-') {
    throw ConfigError(fmt::format("parameter '{}': must be non-negative", key));
  }
  return parse_number<std::uint64_t>(key, it->second);
}

bool ParamSet::get_bool(const std::string& key, bool fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (it->second == "true" || it->second == "1") return true;
  if (it->second == "false" || it->second == "0") return false;
  throw ConfigError(fmt::format("parameter '{}': expected true or false, got '{}'", key, it->second));
}

std::string ParamSet::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

void ParamSet::check_known(const std::vector<std::string>& known, std::string_view where) const {
  for (const auto& [key, value] : values_) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      std::string list;
      for (const auto& k : known) list += (list.empty() ? "" : ", ") + k;
      throw ConfigError(fmt::format("unknown parameter '{}' for {} (known: {})", key, where, list));
    }
  }
}

void ParamSet::merge(const ParamSet& other) {
  for (const auto& [k, v] : other.values_) values_[k] = v;
}

ConfigFile ConfigFile::parse(std::istream& in) {
  ConfigFile cfg;
  std::string current;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    // Strip a comment that is not inside a string.
    bool in_string = false;
    std::size_t cut = raw.size();
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] == '"') in_string = !in_string;
      if (raw[i] == '#' && !in_string) {
        cut = i;
        break;
      }
    }
    const std::string_view line = trim(std::string_view(raw).substr(0, cut));
    if (line.empty()) continue;
    const int indent = static_cast<int>(raw.find_first_not_of(" \t")) + 1;

    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("section header is missing ']'", line_no,
                          indent + static_cast<int>(line.size()));
      }
      const std::string_view name = trim(line.substr(1, line.size() - 2));
      if (name.empty()) throw ConfigError("empty section name", line_no, indent + 1);
      for (std::size_t i = 0; i < name.size(); ++i) {
        if (!is_name_char(name[i]) && name[i] != '.') {
          throw ConfigError(fmt::format("invalid character '{}' in section name", name[i]),
                            line_no, indent + 1 + static_cast<int>(i));
        }
      }
      current = std::string(name);
      if (cfg.sections_.count(current) != 0) {
        throw ConfigError(fmt::format("section [{}] appears twice", current), line_no, indent);
      }
      cfg.sections_[current];
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("expected 'key = value'", line_no, indent);
    }
    const std::string_view key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("missing key before '='", line_no, indent);
    for (std::size_t i = 0; i < key.size(); ++i) {
      if (!is_name_char(key[i])) {
        throw ConfigError(fmt::format("invalid character '{}' in key", key[i]), line_no,
                          indent + static_cast<int>(i));
      }
    }
    if (current.empty()) {
      throw ConfigError(fmt::format("key '{}' outside of any section", key), line_no, indent);
    }
    std::string_view value = trim(line.substr(eq + 1));
    const int value_col =
        indent + static_cast<int>(eq) + 1 +
        static_cast<int>(line.substr(eq + 1).find_first_not_of(" \t") == std::string_view::npos
                             ? 0
                             : line.substr(eq + 1).find_first_not_of(" \t"));
    if (value.empty()) throw ConfigError(fmt::format("missing value for '{}'", key), line_no, value_col);
    std::string stored;
    if (value.front() == '"') {
      if (value.size() < 2 || value.back() != '"') {
        throw ConfigError("unterminated string", line_no, value_col);
      }
      stored = std::string(value.substr(1, value.size() - 2));
    } else {
      for (std::size_t i = 0; i < value.size(); ++i) {
        const char c = value[i];
        if (!(is_name_char(c) || c == '.' || c == '+')) {
          throw ConfigError(fmt::format("unexpected '{}' in value (quote strings)", c), line_no,
                            value_col + static_cast<int>(i));
        }
      }
      stored = std::string(value);
    }
    auto& section = cfg.sections_[current];
    if (!section.emplace(std::string(key), stored).second) {
      throw ConfigError(fmt::format("duplicate key '{}' in [{}]", key, current), line_no, indent);
    }
  }
  return cfg;
}

ConfigFile ConfigFile::parse_string(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse(in);
}

ConfigFile ConfigFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  try {
    return parse(in);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

bool ConfigFile::has_section(std::string_view name) const {
  return sections_.count(std::string(name)) != 0;
}

ParamSet ConfigFile::section(std::string_view name) const {
  const auto it = sections_.find(std::string(name));
  return it == sections_.end() ? ParamSet{} : ParamSet(it->second);
}

std::vector<std::string> ConfigFile::section_names() const {
  std::vector<std::string> out;
  for (const auto& [name, values] : sections_) out.push_back(name);
  return out;
}

std::pair<std::string, std::string> parse_override(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos || eq == 0) {
    throw ConfigError(fmt::format("override '{}' is not of the form key=value", text));
  }
  std::string value(trim(text.substr(eq + 1)));
  if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
    value = value.substr(1, value.size() - 2);
  }
  return {std::string(trim(text.substr(0, eq))), value};
}

}  // namespace biosim
