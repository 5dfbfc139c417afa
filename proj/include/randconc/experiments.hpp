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

// Batch experiments behind the C API and the command-line tool.
//
// A config is a JSON object with a "command" key plus that command's
// parameters; unknown keys and out-of-range values raise ConfigError. A
// report is a JSON object with sorted keys: the echoed config (defaults
// filled in), command results, a list of named checks, an overall "passed"
// flag and "elapsed_ms". Rationals are "num/den" strings.

#ifndef RANDCONC_EXPERIMENTS_HPP
#define RANDCONC_EXPERIMENTS_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "randconc/error.hpp"

namespace randconc::experiments {

constexpr int kSchemaVersion = 1;

class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

const std::vector<std::string>& commands();

/// Runs one experiment. Throws ConfigError for an invalid config; analysis
/// failures (budget, stuck programs) are reported as failing checks.
nlohmann::json run(const nlohmann::json& config);

/// Flattens a report into name,value,decimal rows: every rational result
/// plus the "series" rows when present.
std::string to_csv(const nlohmann::json& report);

}  // namespace randconc::experiments

#endif  // RANDCONC_EXPERIMENTS_HPP
