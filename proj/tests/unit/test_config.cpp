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


#include <doctest.h>

#include <string>

#include "biosim/config.hpp"

using biosim::ConfigError;
using biosim::ConfigFile;
using biosim::ParamSet;

namespace {

ConfigError parse_error(const std::string& text) {
  try {
    ConfigFile::parse_string(text);
  } catch (const ConfigError& e) {
    return e;
  }
  FAIL("expected a parse error");
  return ConfigError("unreachable");
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("sections, comments and strings") {
  const ConfigFile f = ConfigFile::parse_string(
      "# header\n"
      "[run]\n"
      "scenario = \"sir\"   # trailing\n"
      "seed = 42\n"
      "\n"
      "[sir]\n"
      "  infection_radius = 2.5\n"
      "label = \"a # b\"\n"
      "warm = true\n");
  CHECK(f.has_section("run"));
  CHECK_FALSE(f.has_section("pso"));
  CHECK(f.section("pso").empty());
  CHECK(f.section_names() == std::vector<std::string>{"run", "sir"});
  const ParamSet run = f.section("run");
  CHECK(run.get_string("scenario", "") == "sir");
  CHECK(run.get_uint("seed", 0) == 42);
  const ParamSet sir = f.section("sir");
  CHECK(sir.get_double("infection_radius", 0) == 2.5);
  CHECK(sir.get_string("label", "") == "a # b");
  CHECK(sir.get_bool("warm", false));
  CHECK(sir.get_double("missing", 7.5) == 7.5);
}

TEST_CASE("parse errors carry positions") {
  ConfigError e = parse_error("[run]\nseed = 1\nseed = 2\n");
  CHECK(e.line() == 3);
  CHECK(e.column() == 1);
  CHECK(std::string(e.what()).find("duplicate key 'seed'") != std::string::npos);

  e = parse_error("[a]\n[a]\n");
  CHECK(e.line() == 2);

  e = parse_error("[run\n");
  CHECK(e.line() == 1);
  CHECK(e.column() == 5);

  e = parse_error("x = 1\n");
  CHECK(std::string(e.what()).find("outside of any section") != std::string::npos);

  e = parse_error("[s]\nname = \"open\n");
  CHECK(e.line() == 2);
  CHECK(e.column() == 8);

  e = parse_error("[s]\n  just words\n");
  CHECK(e.column() == 3);

  e = parse_error("[s]\nk = 1 2\n");
  CHECK(e.column() == 6);

  CHECK(std::string(e.what()).rfind("line 2, column 6", 0) == 0);
}

TEST_CASE("typed getters reject bad values") {
  ParamSet p;
  p.set("d", "1.5x");
  p.set("n", "-3");
  p.set("b", "yes");
  p.set("plus", "+4");
  CHECK_THROWS_AS(p.get_double("d", 0), ConfigError);
  CHECK(p.get_int("n", 0) == -3);
  CHECK_THROWS_AS(p.get_uint("n", 0), ConfigError);
  CHECK_THROWS_AS(p.get_bool("b", false), ConfigError);
  CHECK(p.get_int("plus", 0) == 4);
  CHECK(p.get_double("plus", 0) == 4.0);
}

TEST_CASE("unknown keys and merging") {
  ParamSet p;
  p.set("alpha", "1");
  p.set("betta", "2");
  CHECK_NOTHROW(p.check_known({"alpha", "betta"}, "section [x]"));
  try {
    p.check_known({"alpha", "beta"}, "section [x]");
    FAIL("expected rejection");
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    CHECK(what.find("'betta'") != std::string::npos);
    CHECK(what.find("known: alpha, beta") != std::string::npos);
  }
  ParamSet q;
  q.set("alpha", "9");
  q.set("gamma", "3");
  p.merge(q);
  CHECK(p.get_int("alpha", 0) == 9);
  CHECK(p.get_int("gamma", 0) == 3);
  CHECK(p.values().size() == 3);
}

TEST_CASE("overrides") {
  CHECK(biosim::parse_override("max_move=3.5") == std::pair<std::string, std::string>{"max_move", "3.5"});
  CHECK(biosim::parse_override(" a = \"b c\"") == std::pair<std::string, std::string>{"a", "b c"});
  CHECK(biosim::parse_override("k=") == std::pair<std::string, std::string>{"k", ""});
  CHECK_THROWS_AS(biosim::parse_override("novalue"), ConfigError);
  CHECK_THROWS_AS(biosim::parse_override("=1"), ConfigError);
}

}  // TEST_SUITE
