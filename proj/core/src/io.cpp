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

#include "forestprune/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace forestprune {

namespace {

using nlohmann::json;

constexpr std::string_view kModelFormatName = "forestprune-model";

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  std::string out(s.substr(first, last - first + 1));
  if (out.size() >= 2 && out.front() == '"' && out.back() == '"') {
    out = out.substr(1, out.size() - 2);
  }
  return out;
}

std::vector<std::string> split(const std::string& line, char delimiter) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delimiter, start);
    cells.push_back(trim(std::string_view(line).substr(
        start, pos == std::string::npos ? std::string::npos : pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return cells;
}

bool parse_double(const std::string& cell, double& out) {
  if (cell.empty()) return false;
  const char* begin = cell.data();
  const char* end = cell.data() + cell.size();
  if (*begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

std::string shortest(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

json node_to_json(const Node& n) {
  return json::array({n.feature, n.threshold, n.left, n.right, n.mu, n.sse,
                      n.n_samples, n.depth});
}

Node node_from_json(const json& j) {
  if (!j.is_array() || j.size() != 8) {
    throw ParseError("malformed model file: node record must have 8 fields");
  }
  Node n;
  n.feature = j[0].get<int>();
  n.threshold = j[1].get<double>();
  n.left = j[2].get<int>();
  n.right = j[3].get<int>();
  n.mu = j[4].get<double>();
  n.sse = j[5].get<double>();
  n.n_samples = j[6].get<Index>();
  n.depth = j[7].get<int>();
  return n;
}

std::ofstream open_for_write(const std::string& path, const char* what) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(std::string("cannot write ") + what + " to '" + path + "'");
  return out;
}

}  // namespace

CsvTable read_csv_table(std::istream& in, char delimiter) {
  std::string line;
  CsvTable table;
  while (std::getline(in, line)) {
    if (!trim(line).empty()) {
      table.header = split(line, delimiter);
      break;
    }
  }
  if (table.header.empty()) throw ParseError("empty file: no header row");
  const std::size_t width = table.header.size();

  std::vector<double> values;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row;
    const auto cells = split(line, delimiter);
    if (cells.size() != width) {
      throw ParseError("row " + std::to_string(row) + ": expected " +
                       std::to_string(width) + " cells, found " +
                       std::to_string(cells.size()));
    }
    for (std::size_t c = 0; c < width; ++c) {
      double v = 0.0;
      if (!parse_double(cells[c], v)) {
        throw ParseError("row " + std::to_string(row) + ", column '" +
                         table.header[c] + "': non-numeric value '" +
                         cells[c] + "'");
      }
      values.push_back(v);
    }
  }
  if (row == 0) throw ParseError("file has a header but no data rows");
  table.values = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic,
                                                Eigen::Dynamic, Eigen::RowMajor>>(
      values.data(), static_cast<Index>(row), static_cast<Index>(width));
  return table;
}

CsvTable read_csv_table(const std::string& path, char delimiter) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open data file '" + path + "'");
  try {
    return read_csv_table(in, delimiter);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

Dataset parse_csv(std::istream& in, const std::string& target, char delimiter) {
  CsvTable table = read_csv_table(in, delimiter);
  const auto it = std::find(table.header.begin(), table.header.end(), target);
  if (it == table.header.end()) {
    throw ParseError("target column '" + target + "' not found in header");
  }
  if (table.header.size() < 2) {
    throw ParseError("no feature columns besides the target");
  }
  const auto target_col = static_cast<Index>(it - table.header.begin());
  Dataset data;
  const Index m = table.values.rows();
  const Index p = table.values.cols() - 1;
  data.X.resize(m, p);
  data.y = table.values.col(target_col);
  Index f = 0;
  for (Index c = 0; c < table.values.cols(); ++c) {
    if (c == target_col) continue;
    data.feature_names.push_back(table.header[static_cast<std::size_t>(c)]);
    data.X.col(f++) = table.values.col(c);
  }
  return data;
}

Dataset load_csv(const std::string& path, const std::string& target,
                 char delimiter) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open data file '" + path + "'");
  try {
    return parse_csv(in, target, delimiter);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void save_csv(const std::string& path, const Dataset& data,
              const std::string& target) {
  auto out = open_for_write(path, "data");
  for (Index c = 0; c < data.cols(); ++c) {
    out << (data.feature_names.empty()
                ? "x" + std::to_string(c + 1)
                : data.feature_names[static_cast<std::size_t>(c)])
        << ',';
  }
  out << target << '\n';
  for (Index r = 0; r < data.rows(); ++r) {
    for (Index c = 0; c < data.cols(); ++c) out << shortest(data.X(r, c)) << ',';
    out << shortest(data.y(r)) << '\n';
  }
  if (!out) throw IoError("failed writing data to '" + path + "'");
}

std::string serialize_model(const ModelFile& model) {
  const Ensemble& e = model.ensemble;
  json trees = json::array();
  for (const auto& t : e.trees) {
    json nodes = json::array();
    for (const auto& n : t.nodes()) nodes.push_back(node_to_json(n));
    trees.push_back(json{{"n_features", t.n_features()}, {"nodes", nodes}});
  }
  json doc{
      {"format", kModelFormatName},
      {"version", kModelFormatVersion},
      {"ensemble",
       {{"kind", std::string(to_string(e.kind))},
        {"gamma", e.gamma},
        {"depth", e.depth},
        {"train_mean", e.train_mean},
        {"n_features", e.n_features},
        {"trees", trees}}},
      {"provenance", model.provenance},
  };
  if (model.solution) {
    doc["solution"] = {{"kept_depth", model.solution->kept_depth},
                       {"beta", model.solution->beta}};
  }
  return doc.dump(1) + "\n";
}

ModelFile deserialize_model(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed model file: ") + e.what());
  }
  try {
    if (!doc.is_object() || doc.value("format", std::string()) != kModelFormatName) {
      throw ParseError("not a forestprune model file");
    }
    const int version = doc.at("version").get<int>();
    if (version > kModelFormatVersion) {
      throw VersionError("model format version " + std::to_string(version) +
                         " is newer than supported version " +
                         std::to_string(kModelFormatVersion));
    }
    if (version < 1) throw ParseError("invalid model format version");

    ModelFile out;
    const json& je = doc.at("ensemble");
    Ensemble& e = out.ensemble;
    e.kind = parse_ensemble_kind(je.at("kind").get<std::string>());
    e.gamma = je.at("gamma").get<double>();
    e.depth = je.at("depth").get<int>();
    e.train_mean = je.at("train_mean").get<double>();
    e.n_features = je.at("n_features").get<int>();
    for (const auto& jt : je.at("trees")) {
      std::vector<Node> nodes;
      for (const auto& jn : jt.at("nodes")) nodes.push_back(node_from_json(jn));
      e.trees.emplace_back(std::move(nodes), jt.at("n_features").get<int>());
    }
    if (doc.contains("solution")) {
      PrunedModel s;
      s.kept_depth = doc["solution"].at("kept_depth").get<std::vector<int>>();
      s.beta = doc["solution"].at("beta").get<std::vector<double>>();
      if (s.kept_depth.size() != e.trees.size() ||
          s.beta.size() != e.trees.size()) {
        throw ParseError("solution length does not match the tree count");
      }
      out.solution = std::move(s);
    }
    if (doc.contains("provenance")) {
      out.provenance =
          doc["provenance"].get<std::map<std::string, std::string>>();
    }
    return out;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed model file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("malformed model file: ") + e.what());
  }
}

void save_model(const std::string& path, const ModelFile& model) {
  const std::string text = serialize_model(model);
  auto out = open_for_write(path, "model");
  out << text;
  if (!out) throw IoError("failed writing model to '" + path + "'");
}

ModelFile load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return deserialize_model(buf.str());
  } catch (const VersionError& e) {
    throw VersionError(path + ": " + e.what());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

ReportFormat parse_report_format(std::string_view name) {
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "table" || name == "text") return ReportFormat::kTable;
  throw std::invalid_argument("unknown report format '" + std::string(name) +
                              "' (expected csv or table)");
}

ReportRow report_row(double alpha, const PruneSolution& solution,
                     std::optional<double> valid_mse) {
  ReportRow row;
  row.param = alpha;
  row.trees = solution.size.trees;
  row.layers = solution.size.layers;
  row.nodes = solution.size.nodes;
  row.train_mse = solution.train_mse;
  row.valid_mse = valid_mse;
  row.iterations = solution.passes;
  return row;
}

std::vector<ReportRow> report_rows(const PathResult& path) {
  std::vector<ReportRow> rows;
  for (const auto& p : path.points) {
    rows.push_back(report_row(p.alpha, p.solution, p.valid_mse));
  }
  return rows;
}

void write_report(std::ostream& out, std::span<const ReportRow> rows,
                  ReportFormat format, std::string_view param_name) {
  const std::vector<std::string> header{
      std::string(param_name), "trees_kept", "layers_kept", "nodes_kept",
      "train_mse", "valid_mse", "iterations"};
  std::vector<std::vector<std::string>> cells;
  for (const auto& r : rows) {
    cells.push_back({shortest(r.param), std::to_string(r.trees),
                     std::to_string(r.layers), std::to_string(r.nodes),
                     shortest(r.train_mse),
                     r.valid_mse ? shortest(*r.valid_mse) : std::string(),
                     std::to_string(r.iterations)});
  }
  if (format == ReportFormat::kCsv) {
    for (std::size_t c = 0; c < header.size(); ++c) {
      out << (c ? "," : "") << header[c];
    }
    out << '\n';
    for (const auto& row : cells) {
      for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
      out << '\n';
    }
    return;
  }
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& row : cells) width[c] = std::max(width[c], row[c].size());
  }
  auto line = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << (c ? "  " : "") << std::setw(static_cast<int>(width[c]))
          << row[c];
    }
    out << '\n';
  };
  line(header);
  for (const auto& row : cells) line(row);
}

void emit_report(const std::string& path, std::span<const ReportRow> rows,
                 ReportFormat format, std::string_view param_name) {
  if (path == "-") {
    write_report(std::cout, rows, format, param_name);
    return;
  }
  auto out = open_for_write(path, "report");
  write_report(out, rows, format, param_name);
  if (!out) throw IoError("failed writing report to '" + path + "'");
}

void emit_report(const std::string& path, const PathResult& result,
                 ReportFormat format) {
  const auto rows = report_rows(result);
  emit_report(path, rows, format);
}

}  // namespace forestprune
