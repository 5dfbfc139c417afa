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

#include "randconc.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "randconc/error.hpp"
#include "randconc/experiments.hpp"
#include "randconc/lang.hpp"

struct rc_program {
  randconc::lang::Expr expr;
};

struct rc_report {
  nlohmann::json json;
};

namespace {

thread_local std::string last_error;

rc_status fail(rc_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Runs f, mapping exceptions to status codes.
template <class F>
rc_status guarded(F&& f) {
  try {
    last_error.clear();
    return f();
  } catch (const randconc::experiments::ConfigError& e) {
    return fail(RC_INVALID_CONFIG, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(RC_INVALID_CONFIG, e.what());
  } catch (const randconc::ParseError& e) {
    return fail(RC_PARSE_ERROR, e.what());
  } catch (const randconc::InvalidArgument& e) {
    return fail(RC_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(RC_INTERNAL, e.what());
  } catch (...) {
    return fail(RC_INTERNAL, "unknown error");
  }
}

}  // namespace

extern "C" {

const char* rc_version(void) { return "1.0.0"; }

const char* rc_last_error(void) { return last_error.c_str(); }

void rc_string_free(char* s) { std::free(s); }

rc_status rc_program_parse(const char* text, rc_program** out) {
  if (!text || !out) return fail(RC_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = new rc_program{randconc::lang::parse_program(text)};
    return RC_OK;
  });
}

void rc_program_free(rc_program* p) { delete p; }

rc_status rc_program_unparse(const rc_program* p, char** out) {
  if (!p || !out) return fail(RC_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = dup(randconc::lang::unparse(p->expr));
    return RC_OK;
  });
}

rc_status rc_program_pretty(const rc_program* p, size_t width, char** out) {
  if (!p || !out) return fail(RC_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = dup(randconc::lang::pretty(p->expr, width));
    return RC_OK;
  });
}

rc_status rc_run(const char* config_json, rc_report** out) {
  if (!config_json || !out) return fail(RC_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto config = nlohmann::json::parse(config_json);
    auto report = randconc::experiments::run(config);
    bool passed = report["passed"].get<bool>();
    *out = new rc_report{std::move(report)};
    return passed ? RC_OK : RC_CHECK_FAILED;
  });
}

void rc_report_free(rc_report* r) { delete r; }

int rc_report_passed(const rc_report* r) { return r && r->json["passed"].get<bool>() ? 1 : 0; }

rc_status rc_report_json(const rc_report* r, int indent, char** out) {
  if (!r || !out) return fail(RC_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = dup(r->json.dump(indent));
    return RC_OK;
  });
}

rc_status rc_report_csv(const rc_report* r, char** out) {
  if (!r || !out) return fail(RC_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    *out = dup(randconc::experiments::to_csv(r->json));
    return RC_OK;
  });
}

const char* rc_commands(void) {
  static const std::string names = [] {
    std::string s;
    for (const auto& c : randconc::experiments::commands()) s += (s.empty() ? "" : " ") + c;
    return s;
  }();
  return names.c_str();
}

}  // extern "C"
