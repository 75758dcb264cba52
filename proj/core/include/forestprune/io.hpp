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

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "forestprune/dataset.hpp"
#include "forestprune/ensemble.hpp"
#include "forestprune/solver.hpp"

namespace forestprune {

class IoError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class VersionError : public Error {
 public:
  using Error::Error;
};

// Raw numeric CSV: header names and an m x columns matrix.
struct CsvTable {
  std::vector<std::string> header;
  Matrix values;
};

CsvTable read_csv_table(std::istream& in, char delimiter = ',');
CsvTable read_csv_table(const std::string& path, char delimiter = ',');

// Header row required; every cell numeric. X keeps the non-target columns in
// file order.
Dataset load_csv(const std::string& path, const std::string& target,
                 char delimiter = ',');
Dataset parse_csv(std::istream& in, const std::string& target,
                  char delimiter = ',');

void save_csv(const std::string& path, const Dataset& data,
              const std::string& target = "y");

inline constexpr int kModelFormatVersion = 1;

struct ModelFile {
  Ensemble ensemble;
  std::optional<PrunedModel> solution;
  // Seed, hyperparameters and data split used to produce the model.
  std::map<std::string, std::string> provenance;
};

// JSON text. Doubles are written in shortest round-trip form, so a reloaded
// model predicts bit-identically.
std::string serialize_model(const ModelFile& model);
ModelFile deserialize_model(std::string_view text);

void save_model(const std::string& path, const ModelFile& model);
ModelFile load_model(const std::string& path);

enum class ReportFormat { kCsv, kTable };

ReportFormat parse_report_format(std::string_view name);

struct ReportRow {
  double param = 0.0;
  int trees = 0;
  Index layers = 0;
  Index nodes = 0;
  double train_mse = 0.0;
  std::optional<double> valid_mse;
  int iterations = 0;
};

std::vector<ReportRow> report_rows(const PathResult& path);
ReportRow report_row(double alpha, const PruneSolution& solution,
                     std::optional<double> valid_mse = std::nullopt);

// `param_name` heads the first column ("alpha" for pruning paths).
void write_report(std::ostream& out, std::span<const ReportRow> rows,
                  ReportFormat format, std::string_view param_name = "alpha");

void emit_report(const std::string& path, std::span<const ReportRow> rows,
                 ReportFormat format, std::string_view param_name = "alpha");
void emit_report(const std::string& path, const PathResult& result,
                 ReportFormat format);

}  // namespace forestprune
