// Copyright 2026 The ForestPrune Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <forestprune/common.hpp>

namespace forestprune::cli {

// Everything one invocation needs. Unset optionals fall back to presets or
// to values recorded in the model's provenance.
struct RunConfig {
  std::string command;

  std::string data;
  std::string valid_data;
  // Defaults to the column recorded at training time, else "y".
  std::optional<std::string> target;
  std::string model;
  std::string out;
  std::string report;
  std::string format = "csv";

  // Ensemble training.
  std::string preset = "bagging";
  std::optional<int> trees;
  std::optional<int> depth;
  std::optional<double> gamma;
  // Boosting: row fraction per tree. Bagging: feature fraction per split.
  std::optional<double> subsample;
  double scale = 1.0;
  std::uint64_t seed = 0;
  double valid_frac = 0.2;

  // Solver.
  std::optional<double> alpha;
  std::vector<double> alpha2{1e-2};
  int rho = 2;
  std::string weighting = "depth";
  std::string search = "smallest-index";
  bool correlate_response = false;
  int grid = 50;
  double min_ratio = 1e-4;
  double tol = 1e-8;

  std::string mode = "ridge";
  std::string method = "trim";
  std::optional<Index> budget_nodes;
  int folds = 0;

  // synth
  Index rows = 1000;
  double noise = 1.0;
};

// Thrown for invalid configurations before any work starts.
class ConfigError : public Error {
 public:
  using Error::Error;
};

void validate(const RunConfig& config);

// Parses argv into a config. Returns nullopt when parsing already produced
// the process exit (help, usage errors), with `exit_code` set.
std::optional<RunConfig> parse_args(int argc, const char* const* argv,
                                    int& exit_code);

// Validates and runs. Results go to `out`; diagnostics to `err` as
// "error: <stage>: <message>". Returns the process exit status.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

int main_entry(int argc, const char* const* argv);

}  // namespace forestprune::cli
