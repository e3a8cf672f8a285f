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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace biosim {

/// Parse or validation error; line and column are 1-based, 0 when unknown.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0, int column = 0);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Flat string-valued parameters with typed accessors. Every key that is
/// read is remembered so that leftovers can be reported as typos.
class ParamSet {
 public:
  ParamSet() = default;
  explicit ParamSet(std::map<std::string, std::string> values) : values_(std::move(values)) {}

  bool contains(std::string_view key) const { return values_.count(std::string(key)) != 0; }
  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
  const std::map<std::string, std::string>& values() const { return values_; }
  bool empty() const { return values_.empty(); }

  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;

  /// Throws ConfigError naming the first key that is not in `known`.
  void check_known(const std::vector<std::string>& known, std::string_view where) const;

  /// Later values win.
  void merge(const ParamSet& other);

 private:
  std::map<std::string, std::string> values_;
};

/// Flat TOML subset: `[section]` or `[scenario.name]` headers, `key = value`
/// lines with numbers, true/false or double-quoted strings, `#` comments.
class ConfigFile {
 public:
  static ConfigFile parse(std::istream& in);
  static ConfigFile parse_string(std::string_view text);
  static ConfigFile load(const std::string& path);

  bool has_section(std::string_view name) const;
  /// Empty set for a missing section.
  ParamSet section(std::string_view name) const;
  std::vector<std::string> section_names() const;

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

/// Splits `key=value`; throws ConfigError on a missing '='.
std::pair<std::string, std::string> parse_override(std::string_view text);

}  // namespace biosim
