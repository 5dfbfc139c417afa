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

// randconc: batch front end over the C API. Each subcommand turns its flags
// into a JSON config, runs it and writes the report.
//
// Exit status: 0 all checks passed, 1 a check failed, 2 invalid config.

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "randconc.h"

namespace {

using json = nlohmann::json;

enum class Kind { kInt, kFlag, kNegFlag, kText, kRational, kIntList, kFile };

struct Binding {
  std::string key;
  Kind kind;
  CLI::Option* opt = nullptr;
  std::string text;
  std::vector<std::string> list;
  bool flag = false;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::int64_t to_int(const std::string& key, const std::string& s) {
  std::size_t used = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw std::runtime_error("--" + key + " expects an integer, got '" + s + "'");
  return v;
}

class Command {
 public:
  Command(CLI::App& app, const std::string& name, const std::string& help) : sub_(app.add_subcommand(name, help)), name_(name) {
    sub_->add_option("--config", config_file_, "JSON config file; flags override its keys");
    sub_->add_option("-o,--out", out_, "Write the report here instead of stdout");
    sub_->add_option("--format", format_, "Report format")->check(CLI::IsMember({"json", "csv"}));
  }

  Command& opt(const std::string& flags, const std::string& key, Kind kind, const std::string& help) {
    auto b = std::make_unique<Binding>();
    b->key = key;
    b->kind = kind;
    switch (kind) {
      case Kind::kFlag:
      case Kind::kNegFlag:
        b->opt = sub_->add_flag(flags, b->flag, help);
        break;
      case Kind::kIntList:
        b->opt = sub_->add_option(flags, b->list, help)->delimiter(',');
        break;
      default:
        b->opt = sub_->add_option(flags, b->text, help);
        break;
    }
    bindings_.push_back(std::move(b));
    return *this;
  }

  CLI::App* app() { return sub_; }
  bool parsed() const { return sub_->parsed(); }

  int run() const {
    json config = json::object();
    try {
      if (!config_file_.empty()) {
        config = json::parse(slurp(config_file_));
        if (!config.is_object()) throw std::runtime_error("config file must hold a JSON object");
      }
      for (const auto& b : bindings_) {
        if (b->opt->count() == 0) continue;
        switch (b->kind) {
          case Kind::kInt:
            config[b->key] = to_int(b->key, b->text);
            break;
          case Kind::kFlag:
            config[b->key] = b->flag;
            break;
          case Kind::kNegFlag:
            config[b->key] = !b->flag;
            break;
          case Kind::kText:
          case Kind::kRational:
            config[b->key] = b->text;
            break;
          case Kind::kFile:
            config[b->key] = slurp(b->text);
            break;
          case Kind::kIntList: {
            json a = json::array();
            for (const auto& s : b->list) a.push_back(to_int(b->key, s));
            config[b->key] = a;
            break;
          }
        }
      }
    } catch (const std::exception& e) {
      std::cerr << "randconc " << name_ << ": " << e.what() << "\n";
      return 2;
    }
    config["command"] = name_;

    rc_report* report = nullptr;
    rc_status st = rc_run(config.dump().c_str(), &report);
    if (!report) {
      std::cerr << "randconc " << name_ << ": " << rc_last_error() << "\n";
      return st == RC_INVALID_CONFIG ? 2 : 3;
    }
    char* text = nullptr;
    rc_status fs = format_ == "csv" ? rc_report_csv(report, &text) : rc_report_json(report, 2, &text);
    if (fs != RC_OK) {
      std::cerr << "randconc " << name_ << ": " << rc_last_error() << "\n";
      rc_report_free(report);
      return 3;
    }
    int code = rc_report_passed(report) ? 0 : 1;
    rc_report_free(report);
    std::string body(text);
    rc_string_free(text);
    if (out_.empty()) {
      std::cout << body << (format_ == "csv" ? "" : "\n");
    } else {
      std::ofstream f(out_, std::ios::binary);
      f << body << (format_ == "csv" ? "" : "\n");
      if (!f) {
        std::cerr << "randconc " << name_ << ": cannot write '" << out_ << "'\n";
        return 2;
      }
    }
    return code;
  }

 private:
  CLI::App* sub_;
  std::string name_;
  std::string config_file_;
  std::string out_;
  std::string format_ = "json";
  std::vector<std::unique_ptr<Binding>> bindings_;
};

void program_options(Command& c) {
  c.opt("--model", "model", Kind::kText, "unbiased-counter, morris-counter or dlm-counter")
      .opt("--program", "program", Kind::kFile, "Program file (s-expression syntax) instead of a model")
      .opt("--threads", "threads", Kind::kInt, "Worker threads")
      .opt("--incrs", "incrs", Kind::kInt, "Increments per worker")
      .opt("--max", "max", Kind::kInt, "Unbiased counter MAX")
      .opt("--bits", "bits", Kind::kInt, "Random bits per DLM increment")
      .opt("--initial", "initial", Kind::kInt, "Initial counter cell")
      .opt("-f,--objective", "f", Kind::kText, "read (result of thread 0) or cell")
      .opt("--cell", "cell", Kind::kInt, "Heap location for -f cell");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact analysis of randomized concurrent programs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", rc_version());
  std::vector<std::unique_ptr<Command>> cmds;
  auto add = [&](const std::string& name, const std::string& help) -> Command& {
    cmds.push_back(std::make_unique<Command>(app, name, help));
    return *cmds.back();
  };

  add("laws", "Run the algebraic law suites and the subset-p falsifier")
      .opt("--suite", "suite", Kind::kText, "Suite name, falsifier, or all")
      .opt("--cases", "cases", Kind::kInt, "Random instances per law")
      .opt("--seed", "seed", Kind::kInt, "Seed")
      .opt("--pairs", "pairs", Kind::kInt, "Falsifier pairs")
      .opt("--functions", "functions", Kind::kInt, "Random functions per falsifier pair");

  add("extrema", "Expected-value extrema of a specification")
      .opt("--model", "model", Kind::kText, "approxN, approxNprime, approxIncr or skiplist")
      .opt("--n", "n", Kind::kInt, "Number of increments")
      .opt("--max", "max", Kind::kInt, "MAX")
      .opt("--l", "l", Kind::kInt, "Starting count")
      .opt("--t", "t", Kind::kInt, "Starting true count (approxNprime)")
      .opt("--keys", "keys", Kind::kIntList, "Skip-list keys")
      .opt("--query", "query", Kind::kInt, "Skip-list query key");

  add("couple", "Check a coupling derivation")
      .opt("--script", "script", Kind::kFile, "Derivation script file")
      .opt("--k", "k", Kind::kInt, "Counter value for the built-in counter coupling")
      .opt("--max", "max", Kind::kInt, "MAX for the built-in counter coupling");

  auto& mdp = add("mdp", "Scheduler-extremal expectations by backward induction");
  program_options(mdp);
  mdp.opt("--budget", "budget", Kind::kInt, "Step budget")
      .opt("--brute-force", "brute_force", Kind::kFlag, "Cross-check by enumerating history-dependent schedulers")
      .opt("--stutters", "stutters", Kind::kInt, "Stutter choices allowed in the brute-force check")
      .opt("--node-cap", "node_cap", Kind::kInt, "Brute-force node cap")
      .opt("--expect-lo", "expect_lo", Kind::kRational, "Assert the minimum")
      .opt("--expect-hi", "expect_hi", Kind::kRational, "Assert the maximum");

  auto& sim = add("simulate", "Monte-Carlo runs under a concrete scheduler");
  program_options(sim);
  sim.opt("--scheduler", "scheduler", Kind::kText, "round-robin or seeded-random")
      .opt("--scheduler-seed", "scheduler_seed", Kind::kInt, "Seed of the seeded-random scheduler")
      .opt("--budget", "budget", Kind::kInt, "Step budget")
      .opt("--trials", "trials", Kind::kInt, "Trials")
      .opt("--seed", "seed", Kind::kInt, "Seed")
      .opt("--workers", "workers", Kind::kInt, "Worker threads (default from RANDCONC_WORKERS)")
      .opt("--no-exact", "exact", Kind::kNegFlag, "Skip the exact comparison")
      .opt("--trace", "trace", Kind::kFlag, "Include one sampled trace");

  add("sandwich", "Program extrema against the counter specification")
      .opt("--model", "model", Kind::kText, "unbiased-counter")
      .opt("--threads", "threads", Kind::kInt, "Worker threads")
      .opt("--incrs", "incrs", Kind::kInt, "Increments per worker")
      .opt("--max", "max", Kind::kInt, "MAX")
      .opt("--initial", "initial", Kind::kInt, "Initial count")
      .opt("--budget", "budget", Kind::kInt, "Step budget");

  add("skiplist-cost", "Skip-list membership cost against its bound")
      .opt("--universe", "universe", Kind::kIntList, "Key universe")
      .opt("--max-size", "max_size", Kind::kInt, "Largest key set")
      .opt("--queries", "queries", Kind::kIntList, "Query keys (default: the universe)")
      .opt("--program-max-size", "program_max_size", Kind::kInt, "Largest key set run through the program")
      .opt("--budget", "budget", Kind::kInt, "Step budget for program runs")
      .opt("--early-flip", "early_flip", Kind::kFlag, "Use the variant flipping before locking");

  add("counter-bias", "Scheduler bias of an approximate counter")
      .opt("--model", "model", Kind::kText, "Counter model")
      .opt("--threads", "threads", Kind::kInt, "Worker threads")
      .opt("--incrs", "incrs", Kind::kInt, "Increments per worker")
      .opt("--max", "max", Kind::kInt, "MAX")
      .opt("--bits", "bits", Kind::kIntList, "Random-bit counts to try")
      .opt("--budget", "budget", Kind::kInt, "Step budget");

  auto& parse = add("parse", "Parse, unparse and pretty-print a program");
  parse.opt("program", "program", Kind::kFile, "Program file").opt("--width", "width", Kind::kInt, "Pretty width");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  for (const auto& c : cmds)
    if (c->parsed()) return c->run();
  return 2;
}
