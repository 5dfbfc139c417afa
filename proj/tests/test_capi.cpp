/*
 * Copyright (c) 2026, The randconc authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <string>

#include <json.hpp>

#include "randconc.h"

using nlohmann::json;

namespace {

std::string take(char* s) {
  std::string r = s ? s : "";
  rc_string_free(s);
  return r;
}

json run_json(const json& config, rc_status* status) {
  rc_report* r = nullptr;
  *status = rc_run(config.dump().c_str(), &r);
  if (!r) return json();
  char* text = nullptr;
  REQUIRE(rc_report_json(r, -1, &text) == RC_OK);
  rc_report_free(r);
  return json::parse(take(text));
}

}  // namespace

TEST_CASE("version and commands") {
  CHECK(std::string(rc_version()) == "1.0.0");
  std::string cmds = rc_commands();
  for (auto c : {"laws", "extrema", "couple", "mdp", "simulate", "sandwich", "skiplist-cost", "counter-bias", "parse"})
    CHECK(cmds.find(c) != std::string::npos);
}

TEST_CASE("program handles") {
  rc_program* p = nullptr;
  REQUIRE(rc_program_parse("(let x (ref 1) (! x))", &p) == RC_OK);
  char* s = nullptr;
  REQUIRE(rc_program_unparse(p, &s) == RC_OK);
  CHECK(take(s) == "(let x (ref 1) (! x))");
  REQUIRE(rc_program_pretty(p, 8, &s) == RC_OK);
  CHECK(take(s).find('\n') != std::string::npos);
  rc_program_free(p);

  p = nullptr;
  CHECK(rc_program_parse("(let x", &p) == RC_PARSE_ERROR);
  CHECK(p == nullptr);
  CHECK(std::strlen(rc_last_error()) > 0);
  CHECK(rc_program_parse(nullptr, &p) == RC_INVALID_ARGUMENT);
  CHECK(rc_program_unparse(nullptr, &s) == RC_INVALID_ARGUMENT);
}

TEST_CASE("reports") {
  rc_status st;
  json r = run_json({{"command", "extrema"}, {"model", "approxN"}, {"n", 3}, {"max", 2}}, &st);
  CHECK(st == RC_OK);
  CHECK(r["schema_version"] == 1);
  CHECK(r["command"] == "extrema");
  CHECK(r["passed"] == true);
  CHECK(r["results"]["lo"] == "3/1");
  CHECK(r["results"]["hi"] == "3/1");
  CHECK(r["config"]["max"] == 2);
  for (const auto& c : r["checks"]) CHECK(c["passed"] == true);

  rc_report* rep = nullptr;
  REQUIRE(rc_run(R"({"command":"extrema","model":"approxN","n":2,"max":2})", &rep) == RC_OK);
  CHECK(rc_report_passed(rep) == 1);
  char* csv = nullptr;
  REQUIRE(rc_report_csv(rep, &csv) == RC_OK);
  std::string text = take(csv);
  CHECK(text.rfind("name,value,decimal\n", 0) == 0);
  CHECK(text.find("lo,2/1,") != std::string::npos);
  rc_report_free(rep);
}

TEST_CASE("config errors") {
  rc_report* r = nullptr;
  CHECK(rc_run("{", &r) == RC_INVALID_CONFIG);
  CHECK(rc_run(R"({"command":"nope"})", &r) == RC_INVALID_CONFIG);
  CHECK(rc_run(R"({"command":"extrema","bogus":1})", &r) == RC_INVALID_CONFIG);
  CHECK(rc_run(R"({"command":"extrema","max":-3})", &r) == RC_INVALID_CONFIG);
  CHECK(r == nullptr);
  CHECK(std::string(rc_last_error()).find("max") != std::string::npos);
  CHECK(rc_run(nullptr, &r) == RC_INVALID_ARGUMENT);
}

TEST_CASE("couple scripts") {
  rc_status st;
  json ok = run_json({{"command", "couple"},
                      {"script", "(bind (pchoice (ret 1 1 eq) 1/2 (ret 0 0 eq)) eq"
                                 " (case 1 1 (ret 2 2 eq)) (case 0 0 (ret 0 0 eq)))"}},
                     &st);
  CHECK(st == RC_OK);
  CHECK(ok["passed"] == true);
  json bad = run_json({{"command", "couple"}, {"script", "(equiv (ret 1 1 eq) (ival (1 1)) (set (ival (2 1))))"}}, &st);
  CHECK(st == RC_CHECK_FAILED);
  CHECK(bad["passed"] == false);
  json built_in = run_json({{"command", "couple"}}, &st);
  CHECK(st == RC_OK);
  CHECK(built_in["checks"].size() >= 5);
}

TEST_CASE("analysis failures become failing checks") {
  rc_status st;
  json r = run_json({{"command", "mdp"}, {"model", "unbiased-counter"}, {"threads", 2}, {"budget", 3}}, &st);
  CHECK(st == RC_CHECK_FAILED);
  CHECK(r["passed"] == false);
}
