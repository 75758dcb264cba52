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

#include "forestprune_cli/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>

#include <CLI11.hpp>
#include <forestprune/forestprune.hpp>

namespace forestprune::cli {

namespace {

const std::vector<std::string> kCommands{"synth", "train",   "prune",   "path",
                                         "polish", "joint",  "baseline", "predict",
                                         "report", "compare"};

class StageError : public Error {
 public:
  using Error::Error;
};

// Runs `f`, prefixing any failure with the stage name.
template <typename F>
auto stage(std::string_view name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(std::string(name) + ": " + e.what());
  }
}

std::string num(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string num(Index v) { return std::to_string(v); }
std::string num(int v) { return std::to_string(v); }

void summary(std::ostream& out,
             const std::vector<std::pair<std::string, std::string>>& fields) {
  for (const auto& [k, v] : fields) out << k << '=' << v << '\n';
}

using Table = std::vector<std::vector<std::string>>;

void write_table(std::ostream& out, const std::vector<std::string>& header,
                 const Table& rows, ReportFormat format) {
  if (format == ReportFormat::kCsv) {
    auto line = [&](const std::vector<std::string>& r) {
      for (std::size_t c = 0; c < r.size(); ++c) out << (c ? "," : "") << r[c];
      out << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return;
  }
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& r : rows) width[c] = std::max(width[c], r[c].size());
  }
  auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      out << (c ? "  " : "");
      out << std::string(width[c] - r[c].size(), ' ') << r[c];
    }
    out << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
}

// Writes through `fn` to the named file, or to `fallback` when path is empty
// or "-".
template <typename F>
void with_output(const std::string& path, std::ostream& fallback, F&& fn) {
  if (path.empty() || path == "-") {
    fn(fallback);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot write '" + path + "'");
  fn(file);
  if (!file) throw IoError("failed writing '" + path + "'");
}

std::string provenance_or(const ModelFile& f, const std::string& key,
                          const std::string& fallback) {
  const auto it = f.provenance.find(key);
  return it == f.provenance.end() ? fallback : it->second;
}

SolverOptions solver_options(const RunConfig& c) {
  SolverOptions so;
  so.tol = c.tol;
  so.rule = parse_search_rule(c.search);
  so.correlate_with_response = c.correlate_response;
  so.seed = c.seed;
  return so;
}

CompareOptions compare_options(const RunConfig& c) {
  CompareOptions o;
  o.node_budget = c.budget_nodes.value_or(0);
  o.weighting = parse_weighting(c.weighting);
  o.rule = parse_search_rule(c.search);
  o.grid_size = c.grid;
  o.tol = c.tol;
  o.alpha2 = c.alpha2.front();
  o.seed = c.seed;
  return o;
}

// ---------------------------------------------------------------- training

struct Trained {
  Ensemble ensemble;
  std::map<std::string, std::string> provenance;
};

int scaled(int base, double scale) {
  return std::max(1, static_cast<int>(std::lround(base * scale)));
}

Trained train_ensemble(const RunConfig& c, const Dataset& data) {
  Trained t;
  const EnsembleKind kind = parse_ensemble_kind(c.preset);
  t.provenance["kind"] = std::string(to_string(kind));
  t.provenance["seed"] = std::to_string(c.seed);
  if (kind == EnsembleKind::kBagging) {
    BaggingParams p;
    p.n_trees = c.trees.value_or(scaled(500, c.scale));
    p.max_depth = c.depth.value_or(20);
    if (c.subsample) {
      p.feature_subsample = std::max(
          1, static_cast<int>(std::lround(*c.subsample * static_cast<double>(data.cols()))));
    }
    p.seed = c.seed;
    t.ensemble = fit_bagging(data, p);
    t.provenance["trees"] = std::to_string(p.n_trees);
    t.provenance["depth"] = std::to_string(p.max_depth);
    t.provenance["feature_subsample"] = std::to_string(p.feature_subsample);
  } else {
    BoostingParams p;
    p.n_trees = c.trees.value_or(scaled(250, c.scale));
    p.max_depth = c.depth.value_or(5);
    p.gamma = c.gamma.value_or(0.1);
    p.row_subsample = c.subsample.value_or(0.25);
    p.seed = c.seed;
    t.ensemble = fit_boosting(data, p);
    t.provenance["trees"] = std::to_string(p.n_trees);
    t.provenance["depth"] = std::to_string(p.max_depth);
    t.provenance["gamma"] = num(p.gamma);
    t.provenance["subsample"] = num(p.row_subsample);
  }
  return t;
}

struct Split {
  Dataset train;
  Dataset valid;
};

Split split_data(const Dataset& data, double frac, std::uint64_t seed) {
  const RowSplit rows = train_valid_split(data.rows(), frac, seed);
  Split s{subset_rows(data, rows.train), Dataset{}};
  s.valid = rows.valid.empty() ? s.train : subset_rows(data, rows.valid);
  return s;
}

// --------------------------------------------------------------- workspace

struct Workspace {
  ModelFile file;
  Dataset train;
  Dataset valid;
};

Workspace open_workspace(const RunConfig& c) {
  Workspace w;
  w.file = stage("load model", [&] { return load_model(c.model); });
  const std::string data_path =
      c.data.empty() ? provenance_or(w.file, "data", "") : c.data;
  if (data_path.empty()) {
    throw StageError("load data: --data is required (the model records no data path)");
  }
  const std::string target =
      c.target.value_or(provenance_or(w.file, "target", "y"));
  const Dataset data = stage("load data", [&] { return load_csv(data_path, target); });
  const std::string valid_path =
      c.valid_data.empty() ? provenance_or(w.file, "valid_data", "") : c.valid_data;
  if (!valid_path.empty()) {
    w.train = data;
    w.valid = stage("load data", [&] { return load_csv(valid_path, target); });
  } else {
    const double frac = std::stod(provenance_or(w.file, "valid_frac", num(c.valid_frac)));
    const auto seed = static_cast<std::uint64_t>(
        std::stoull(provenance_or(w.file, "split_seed", std::to_string(c.seed))));
    Split s = split_data(data, frac, seed);
    w.train = std::move(s.train);
    w.valid = std::move(s.valid);
  }
  if (w.train.cols() != w.file.ensemble.n_features) {
    throw StageError("load data: data has " + std::to_string(w.train.cols()) +
                     " features, model expects " +
                     std::to_string(w.file.ensemble.n_features));
  }
  return w;
}

double mse_of(const Ensemble& e, const Dataset& d, const PrunedModel& m) {
  return mean_squared_error(predict_ensemble(e, d.X, m), d.y);
}

ReportRow model_row(double param, const Ensemble& e, const PrunedModel& model,
                    const Dataset& train, const Dataset& valid, int iterations) {
  const ModelSize size = measure(e, model);
  ReportRow row;
  row.param = param;
  row.trees = size.trees;
  row.layers = size.layers;
  row.nodes = size.nodes;
  row.train_mse = mse_of(e, train, model);
  row.valid_mse = mse_of(e, valid, model);
  row.iterations = iterations;
  return row;
}

void save_solution(const RunConfig& c, ModelFile file, const PrunedModel& model,
                   const std::map<std::string, std::string>& extra) {
  if (c.out.empty()) return;
  file.solution = model;
  for (const auto& [k, v] : extra) file.provenance[k] = v;
  stage("write output", [&] { save_model(c.out, file); });
}

// ---------------------------------------------------------------- commands

int cmd_synth(const RunConfig& c, std::ostream& out) {
  const Dataset d = make_friedman1(c.rows, c.noise, c.seed);
  stage("write output", [&] { save_csv(c.out, d, c.target.value_or("y")); });
  summary(out, {{"rows", num(d.rows())}, {"features", num(d.cols())}, {"out", c.out}});
  return 0;
}

int cmd_train(const RunConfig& c, std::ostream& out) {
  const std::string target = c.target.value_or("y");
  const Dataset data = stage("load data", [&] { return load_csv(c.data, target); });
  Split s;
  std::map<std::string, std::string> prov{{"data", c.data}, {"target", target}};
  if (!c.valid_data.empty()) {
    s.train = data;
    s.valid = stage("load data", [&] { return load_csv(c.valid_data, target); });
    prov["valid_data"] = c.valid_data;
  } else {
    s = split_data(data, c.valid_frac, c.seed);
    prov["valid_frac"] = num(c.valid_frac);
    prov["split_seed"] = std::to_string(c.seed);
  }
  Trained t = stage("train", [&] { return train_ensemble(c, s.train); });
  prov.insert(t.provenance.begin(), t.provenance.end());
  const ModelFile file{t.ensemble, std::nullopt, prov};
  stage("write output", [&] { save_model(c.out, file); });
  const PrunedModel full = PrunedModel::full(t.ensemble);
  summary(out, {{"kind", std::string(to_string(t.ensemble.kind))},
                {"trees", num(t.ensemble.size())},
                {"depth", num(t.ensemble.depth)},
                {"nodes", num(t.ensemble.node_count())},
                {"train_mse", num(mse_of(t.ensemble, s.train, full))},
                {"valid_mse", num(mse_of(t.ensemble, s.valid, full))},
                {"out", c.out}});
  return 0;
}

int cmd_prune(const RunConfig& c, std::ostream& out) {
  const Workspace w = open_workspace(c);
  const Ensemble& e = w.file.ensemble;
  const PruneSolution sol = stage("solve", [&] {
    const PruneProblem problem = PruneProblem::build(e, w.train.X, w.train.y);
    const WeightScheme weights = make_weights(e, parse_weighting(c.weighting));
    return cbcd_solve(problem, weights, *c.alpha, SolverState::zeros(problem),
                      solver_options(c));
  });
  const double valid = mse_of(e, w.valid, sol.model);
  summary(out, {{"alpha", num(*c.alpha)},
                {"objective", num(sol.objective)},
                {"penalty", num(sol.objective - sol.train_mse)},
                {"trees", num(sol.size.trees)},
                {"layers", num(sol.size.layers)},
                {"nodes", num(sol.size.nodes)},
                {"train_mse", num(sol.train_mse)},
                {"valid_mse", num(valid)},
                {"passes", num(sol.passes)}});
  if (!c.report.empty()) {
    const std::vector<ReportRow> rows{report_row(*c.alpha, sol, valid)};
    stage("write report", [&] { emit_report(c.report, rows, parse_report_format(c.format)); });
  }
  save_solution(c, w.file, sol.model,
                {{"alpha", num(*c.alpha)}, {"weighting", c.weighting}, {"search", c.search}});
  return 0;
}

int cmd_path(const RunConfig& c, std::ostream& out) {
  const Workspace w = open_workspace(c);
  const Ensemble& e = w.file.ensemble;
  PathResult path = stage("solve", [&] {
    const PruneProblem problem = PruneProblem::build(e, w.train.X, w.train.y);
    const WeightScheme weights = make_weights(e, parse_weighting(c.weighting));
    PathOptions po;
    po.grid_size = c.grid;
    po.min_ratio = c.min_ratio;
    po.solver = solver_options(c);
    return regularization_path(problem, weights, po);
  });
  attach_validation(path, e, w.valid.X, w.valid.y);
  const auto rows = report_rows(path);
  stage("write report", [&] {
    with_output(c.report, out, [&](std::ostream& s) {
      write_report(s, rows, parse_report_format(c.format));
    });
  });
  if (!c.out.empty()) {
    const auto best = std::min_element(
        path.points.begin(), path.points.end(),
        [](const PathPoint& a, const PathPoint& b) { return *a.valid_mse < *b.valid_mse; });
    save_solution(c, w.file, best->solution.model,
                  {{"alpha", num(best->alpha)}, {"weighting", c.weighting}, {"search", c.search}});
  }
  return 0;
}

int cmd_polish(const RunConfig& c, std::ostream& out) {
  const Workspace w = open_workspace(c);
  const Ensemble& e = w.file.ensemble;
  if (!w.file.solution) {
    throw StageError("polish: model has no pruning solution; run prune or path --out first");
  }
  const PrunedModel& pruned = *w.file.solution;
  const PruneProblem problem =
      stage("polish", [&] { return PruneProblem::build(e, w.train.X, w.train.y); });
  const PolishBasis basis = PolishBasis::build(problem, pruned);

  if (c.mode == "ridge") {
    const double alpha2 = c.alpha2.front();
    const Vector beta = stage("polish", [&] { return ridge_polish(basis, problem.target(), alpha2); });
    const PrunedModel polished = apply_polish(pruned, basis, beta);
    const ReportRow row = model_row(alpha2, e, polished, w.train, w.valid, 0);
    summary(out, {{"alpha2", num(alpha2)},
                  {"trees", num(row.trees)},
                  {"nodes", num(row.nodes)},
                  {"train_mse_before", num(mse_of(e, w.train, pruned))},
                  {"valid_mse_before", num(mse_of(e, w.valid, pruned))},
                  {"train_mse", num(row.train_mse)},
                  {"valid_mse", num(*row.valid_mse)}});
    if (!c.report.empty()) {
      const std::vector<ReportRow> rows{row};
      stage("write report", [&] {
        emit_report(c.report, rows, parse_report_format(c.format), "alpha2");
      });
    }
    save_solution(c, w.file, polished, {{"polish", "ridge"}, {"alpha2", num(alpha2)}});
    return 0;
  }

  std::vector<double> grid = c.alpha2;
  std::sort(grid.begin(), grid.end());
  SubsetPolishOptions so;
  so.seed = c.seed;
  const auto results = stage("polish", [&] {
    return subset_polish_path(basis, problem.target(), grid, so);
  });
  std::vector<ReportRow> rows;
  std::vector<PrunedModel> models;
  for (std::size_t j = 0; j < results.size(); ++j) {
    models.push_back(apply_polish(pruned, basis, results[j].beta));
    rows.push_back(model_row(grid[j], e, models.back(), w.train, w.valid,
                             results[j].iterations));
  }
  stage("write report", [&] {
    with_output(c.report, out, [&](std::ostream& s) {
      write_report(s, rows, parse_report_format(c.format), "alpha2");
    });
  });
  if (!c.out.empty()) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < rows.size(); ++j) {
      if (*rows[j].valid_mse < *rows[best].valid_mse) best = j;
    }
    save_solution(c, w.file, models[best], {{"polish", "subset"}, {"alpha2", num(grid[best])}});
  }
  return 0;
}

int cmd_joint(const RunConfig& c, std::ostream& out) {
  const Workspace w = open_workspace(c);
  const Ensemble& e = w.file.ensemble;
  const Penalty penalty{*c.alpha, beta_mode_for_rho(c.rho), c.alpha2.front()};
  const PruneSolution sol = stage("solve", [&] {
    const PruneProblem problem = PruneProblem::build(e, w.train.X, w.train.y);
    const WeightScheme weights = make_weights(e, parse_weighting(c.weighting));
    return joint_solve(problem, weights, penalty, SolverState::zeros(problem),
                       solver_options(c));
  });
  const double valid = mse_of(e, w.valid, sol.model);
  summary(out, {{"alpha", num(*c.alpha)},
                {"alpha2", num(c.alpha2.front())},
                {"rho", num(c.rho)},
                {"objective", num(sol.objective)},
                {"trees", num(sol.size.trees)},
                {"layers", num(sol.size.layers)},
                {"nodes", num(sol.size.nodes)},
                {"train_mse", num(sol.train_mse)},
                {"valid_mse", num(valid)},
                {"passes", num(sol.passes)}});
  if (!c.report.empty()) {
    const std::vector<ReportRow> rows{report_row(*c.alpha, sol, valid)};
    stage("write report", [&] { emit_report(c.report, rows, parse_report_format(c.format)); });
  }
  save_solution(c, w.file, sol.model,
                {{"alpha", num(*c.alpha)}, {"alpha2", num(c.alpha2.front())},
                 {"rho", num(c.rho)}, {"weighting", c.weighting}});
  return 0;
}

MethodResult run_method(const std::string& method, const Ensemble& e,
                        const Dataset& train, const Dataset& valid,
                        const CompareOptions& o) {
  if (method == "trim") return select_trim(e, train, valid, o);
  if (method == "lasso") return select_lasso(e, train, valid, o);
  if (method == "ccp") return select_ccp(e, train, valid, o);
  if (method == "bsts") return select_bsts(e, train, valid, o);
  return select_forestprune(e, train, valid, o);
}

int cmd_baseline(const RunConfig& c, std::ostream& out) {
  const Workspace w = open_workspace(c);
  const MethodResult r = stage("baseline", [&] {
    return run_method(c.method, w.file.ensemble, w.train, w.valid, compare_options(c));
  });
  summary(out, {{"method", r.method},
                {"setting", r.setting},
                {"budget_nodes", num(*c.budget_nodes)},
                {"trees", num(r.size.trees)},
                {"nodes", num(r.size.nodes)},
                {"train_mse", num(r.train_mse)},
                {"valid_mse", num(r.valid_mse)}});
  if (!c.out.empty()) {
    ModelFile file = w.file;
    file.ensemble = r.ensemble;
    save_solution(c, file, r.model, {{"method", r.method}, {"setting", r.setting}});
  }
  return 0;
}

int cmd_predict(const RunConfig& c, std::ostream& out) {
  const ModelFile file = stage("load model", [&] { return load_model(c.model); });
  const CsvTable table = stage("load data", [&] { return read_csv_table(c.data); });
  const std::string target = c.target.value_or(provenance_or(file, "target", "y"));
  const auto it = std::find(table.header.begin(), table.header.end(), target);
  const Index target_col =
      it == table.header.end() ? -1 : static_cast<Index>(it - table.header.begin());
  Matrix X(table.values.rows(), table.values.cols() - (target_col >= 0 ? 1 : 0));
  for (Index col = 0, f = 0; col < table.values.cols(); ++col) {
    if (col != target_col) X.col(f++) = table.values.col(col);
  }
  if (X.cols() != file.ensemble.n_features) {
    throw StageError("load data: data has " + std::to_string(X.cols()) +
                     " feature columns, model expects " +
                     std::to_string(file.ensemble.n_features));
  }
  const PrunedModel model = file.solution.value_or(PrunedModel::full(file.ensemble));
  const Vector pred = predict_ensemble(file.ensemble, X, model);
  stage("write output", [&] {
    with_output(c.out, out, [&](std::ostream& s) {
      s << "prediction\n";
      for (Index i = 0; i < pred.size(); ++i) s << num(pred(i)) << '\n';
    });
  });
  if (!c.out.empty()) {
    std::vector<std::pair<std::string, std::string>> fields{{"rows", num(pred.size())}};
    if (target_col >= 0) {
      fields.emplace_back("mse", num(mean_squared_error(pred, table.values.col(target_col))));
    }
    summary(out, fields);
  }
  return 0;
}

int cmd_report(const RunConfig& c, std::ostream& out) {
  const Workspace w = open_workspace(c);
  const Ensemble& e = w.file.ensemble;
  const PrunedModel model = w.file.solution.value_or(PrunedModel::full(e));
  const double alpha = std::stod(provenance_or(w.file, "alpha", "0"));
  const std::vector<ReportRow> rows{model_row(alpha, e, model, w.train, w.valid, 0)};
  stage("write report", [&] {
    with_output(c.report, out, [&](std::ostream& s) {
      write_report(s, rows, parse_report_format(c.format));
    });
  });
  return 0;
}

int cmd_compare(const RunConfig& c, std::ostream& out) {
  const CompareOptions o = compare_options(c);
  const ReportFormat format = parse_report_format(c.format);
  if (c.folds == 0) {
    const Workspace w = open_workspace(c);
    const auto results = stage("compare", [&] {
      return compare_methods(w.file.ensemble, w.train, w.valid, o);
    });
    Table rows;
    for (const auto& r : results) {
      rows.push_back({r.method, r.setting, num(r.size.trees), num(r.size.nodes),
                      num(r.train_mse), num(r.valid_mse)});
    }
    stage("write report", [&] {
      with_output(c.report, out, [&](std::ostream& s) {
        write_table(s, {"method", "setting", "trees_kept", "nodes_kept", "train_mse", "valid_mse"},
                    rows, format);
      });
    });
    return 0;
  }

  const std::string target = c.target.value_or("y");
  const Dataset data = stage("load data", [&] { return load_csv(c.data, target); });
  const auto folds = kfold_splits(data.rows(), c.folds, c.seed);
  std::vector<std::string> methods;
  std::vector<double> test_sum, valid_sum, nodes_sum;
  std::vector<Index> nodes_max;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    const Dataset rest = subset_rows(data, folds[f].train);
    const Dataset held = subset_rows(data, folds[f].valid);
    const Split s = split_data(rest, c.valid_frac, c.seed + f);
    const Trained t = stage("train", [&] { return train_ensemble(c, s.train); });
    const auto results = stage("compare", [&] {
      return compare_methods(t.ensemble, s.train, s.valid, o);
    });
    if (methods.empty()) {
      for (const auto& r : results) methods.push_back(r.method);
      test_sum.assign(methods.size(), 0.0);
      valid_sum.assign(methods.size(), 0.0);
      nodes_sum.assign(methods.size(), 0.0);
      nodes_max.assign(methods.size(), 0);
    }
    for (std::size_t j = 0; j < results.size(); ++j) {
      const auto& r = results[j];
      test_sum[j] += mse_of(r.ensemble, held, r.model);
      valid_sum[j] += r.valid_mse;
      nodes_sum[j] += static_cast<double>(r.size.nodes);
      nodes_max[j] = std::max(nodes_max[j], r.size.nodes);
    }
  }
  const double k = static_cast<double>(folds.size());
  Table rows;
  for (std::size_t j = 0; j < methods.size(); ++j) {
    rows.push_back({methods[j], num(c.folds), num(nodes_sum[j] / k), num(nodes_max[j]),
                    num(valid_sum[j] / k), num(test_sum[j] / k)});
  }
  stage("write report", [&] {
    with_output(c.report, out, [&](std::ostream& s) {
      write_table(s, {"method", "folds", "mean_nodes", "max_nodes", "mean_valid_mse", "mean_test_mse"},
                  rows, format);
    });
  });
  return 0;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

bool one_of(const std::string& v, std::initializer_list<const char*> options) {
  return std::any_of(options.begin(), options.end(),
                     [&](const char* o) { return v == o; });
}

}  // namespace

void validate(const RunConfig& c) {
  require(std::find(kCommands.begin(), kCommands.end(), c.command) != kCommands.end(),
          "unknown command '" + c.command + "'");
  const std::string& cmd = c.command;
  auto needs = [&](bool present, const char* flag) {
    require(present, cmd + " requires " + flag);
  };
  if (cmd == "synth") {
    needs(!c.out.empty(), "--out");
    require(c.rows >= 1, "--rows must be >= 1");
    require(c.noise >= 0.0, "--noise must be >= 0");
  }
  if (cmd == "train") {
    needs(!c.data.empty(), "--data");
    needs(!c.out.empty(), "--out");
  }
  if (one_of(cmd, {"prune", "path", "polish", "joint", "baseline", "predict", "report"})) {
    needs(!c.model.empty(), "--model");
  }
  if (one_of(cmd, {"prune", "joint"})) needs(c.alpha.has_value(), "--alpha");
  if (one_of(cmd, {"baseline", "compare"})) needs(c.budget_nodes.has_value(), "--budget-nodes");
  if (cmd == "predict") needs(!c.data.empty(), "--data");
  if (cmd == "compare") {
    require(c.folds == 0 || c.folds >= 2, "--folds must be 0 (single split) or >= 2");
    if (c.folds == 0) {
      needs(!c.model.empty(), "--model (or --data with --folds)");
    } else {
      needs(!c.data.empty(), "--data when --folds is set");
    }
  }

  require(one_of(c.preset, {"bagging", "boosting"}),
          "--preset must be bagging or boosting (got '" + c.preset + "')");
  require(!(c.gamma && c.preset == "bagging"),
          "--gamma applies to boosting only; bagging uses 1/trees");
  require(!c.gamma || *c.gamma > 0.0, "--gamma must be > 0");
  require(!c.trees || *c.trees >= 1, "--trees must be >= 1");
  require(!c.depth || *c.depth >= 1, "--depth must be >= 1");
  require(!c.subsample || (*c.subsample > 0.0 && *c.subsample <= 1.0),
          "--subsample must lie in (0, 1]");
  require(c.scale > 0.0, "--scale must be > 0");
  require(c.valid_frac >= 0.0 && c.valid_frac < 1.0, "--valid-frac must lie in [0, 1)");

  require(!c.alpha || *c.alpha >= 0.0, "--alpha must be >= 0");
  require(!c.alpha2.empty(), "--alpha2 needs at least one value");
  for (double a : c.alpha2) require(a >= 0.0, "--alpha2 values must be >= 0");
  require(c.rho == 0 || c.rho == 2,
          "--rho must be 0 (best subset) or 2 (ridge); got " + std::to_string(c.rho));
  require(one_of(c.weighting, {"depth", "node"}),
          "--weighting must be depth or node (got '" + c.weighting + "')");
  require(one_of(c.search, {"smallest-index", "best-corr", "none"}),
          "--search must be smallest-index, best-corr or none (got '" + c.search + "')");
  require(c.grid >= 2, "--grid must be >= 2");
  require(c.min_ratio > 0.0 && c.min_ratio < 1.0, "--min-ratio must lie in (0, 1)");
  require(c.tol > 0.0, "--tol must be > 0");
  require(one_of(c.mode, {"ridge", "subset"}),
          "--mode must be ridge or subset (got '" + c.mode + "')");
  require(!(cmd == "polish" && c.mode == "ridge" && c.alpha2.size() != 1),
          "ridge polishing takes a single --alpha2 value");
  require(!(cmd == "polish" && c.mode == "ridge" && c.alpha2.front() <= 0.0),
          "ridge polishing needs --alpha2 > 0");
  require(one_of(c.method, {"trim", "lasso", "ccp", "bsts", "forestprune"}),
          "--method must be trim, lasso, ccp, bsts or forestprune (got '" + c.method + "')");
  require(!c.budget_nodes || *c.budget_nodes >= 0, "--budget-nodes must be >= 0");
  require(one_of(c.format, {"csv", "table"}),
          "--format must be csv or table (got '" + c.format + "')");
}

std::optional<RunConfig> parse_args(int argc, const char* const* argv, int& exit_code) {
  RunConfig c;
  CLI::App app{"Train tree ensembles and prune their depth layers."};
  app.name("forestprune");
  app.require_subcommand(1);

  auto data = [&](CLI::App* s) {
    s->add_option("--data", c.data, "CSV file with a header row");
    s->add_option("--target", c.target, "Response column name");
  };
  auto split = [&](CLI::App* s) {
    s->add_option("--valid-data", c.valid_data, "Separate validation CSV");
    s->add_option("--valid-frac", c.valid_frac, "Validation fraction when no validation file is given");
  };
  auto model = [&](CLI::App* s) { s->add_option("--model", c.model, "Model file"); };
  auto output = [&](CLI::App* s, const char* what) { s->add_option("--out", c.out, what); };
  auto report = [&](CLI::App* s) {
    s->add_option("--report", c.report, "Report path ('-' for stdout)");
    s->add_option("--format", c.format, "Report format: csv or table");
  };
  auto ensemble = [&](CLI::App* s) {
    s->add_option("--preset", c.preset, "bagging or boosting");
    s->add_option("--trees", c.trees, "Number of trees (default: preset scaled by --scale)");
    s->add_option("--depth", c.depth, "Maximum tree depth");
    s->add_option("--gamma", c.gamma, "Boosting learning rate");
    s->add_option("--subsample", c.subsample,
                  "Boosting row fraction, or bagging feature fraction per split");
    s->add_option("--scale", c.scale, "Multiplier on the preset tree count");
  };
  auto solver = [&](CLI::App* s) {
    s->add_option("--weighting", c.weighting, "depth or node");
    s->add_option("--search", c.search, "smallest-index, best-corr or none");
    s->add_flag("--corr-response", c.correlate_response,
                "best-corr correlates with the response instead of the residual");
    s->add_option("--tol", c.tol, "Relative convergence tolerance");
  };
  auto seed = [&](CLI::App* s) { s->add_option("--seed", c.seed, "Random seed"); };

  auto* synth = app.add_subcommand("synth", "Write a Friedman #1 dataset");
  synth->add_option("--rows", c.rows, "Number of rows");
  synth->add_option("--noise", c.noise, "Noise standard deviation");
  synth->add_option("--target", c.target, "Response column name");
  output(synth, "CSV path");
  seed(synth);

  auto* train = app.add_subcommand("train", "Fit an ensemble and save it");
  data(train);
  split(train);
  ensemble(train);
  output(train, "Model path");
  seed(train);

  auto* prune = app.add_subcommand("prune", "Prune at a single alpha");
  for (auto* s : {prune}) {
    model(s);
    data(s);
    split(s);
    solver(s);
    seed(s);
    report(s);
    output(s, "Model path for the pruned solution");
    s->add_option("--alpha", c.alpha, "Regularization strength");
  }

  auto* path = app.add_subcommand("path", "Warm-started regularization path");
  model(path);
  data(path);
  split(path);
  solver(path);
  seed(path);
  report(path);
  output(path, "Model path for the best-validation solution");
  path->add_option("--grid", c.grid, "Number of alpha values");
  path->add_option("--min-ratio", c.min_ratio, "Smallest alpha as a fraction of alpha_max");

  auto* polish = app.add_subcommand("polish", "Reweight the trees of a pruned model");
  model(polish);
  data(polish);
  split(polish);
  seed(polish);
  report(polish);
  output(polish, "Model path for the polished solution");
  polish->add_option("--mode", c.mode, "ridge or subset");
  polish->add_option("--alpha2", c.alpha2, "Penalty; a comma list sweeps subset mode")
      ->delimiter(',');

  auto* joint = app.add_subcommand("joint", "Prune and reweight jointly");
  model(joint);
  data(joint);
  split(joint);
  solver(joint);
  seed(joint);
  report(joint);
  output(joint, "Model path for the solution");
  joint->add_option("--alpha", c.alpha, "Layer penalty");
  joint->add_option("--alpha2", c.alpha2, "Weight penalty")->delimiter(',');
  joint->add_option("--rho", c.rho, "0 (best subset) or 2 (ridge)");

  auto* baseline = app.add_subcommand("baseline", "Run a competing method under a node budget");
  model(baseline);
  data(baseline);
  split(baseline);
  seed(baseline);
  output(baseline, "Model path for the selected model");
  baseline->add_option("--method", c.method, "trim, lasso, ccp or bsts");
  baseline->add_option("--budget-nodes", c.budget_nodes, "Node budget");

  auto* predict = app.add_subcommand("predict", "Predict with a saved model");
  model(predict);
  data(predict);
  output(predict, "Prediction CSV path (default stdout)");

  auto* rep = app.add_subcommand("report", "Report the size and error of a saved model");
  model(rep);
  data(rep);
  split(rep);
  report(rep);

  auto* compare = app.add_subcommand("compare", "ForestPrune and all baselines at one budget");
  model(compare);
  data(compare);
  split(compare);
  ensemble(compare);
  solver(compare);
  seed(compare);
  report(compare);
  compare->add_option("--budget-nodes", c.budget_nodes, "Node budget");
  compare->add_option("--folds", c.folds, "Cross-validation folds (0: use the model's split)");
  compare->add_option("--grid", c.grid, "Number of alpha values");
  compare->add_option("--alpha2", c.alpha2, "Ridge polish strength (0 disables)")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    exit_code = app.exit(e);
    return std::nullopt;
  }
  c.command = app.get_subcommands().front()->get_name();
  return c;
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    validate(c);
  } catch (const ConfigError& e) {
    err << "error: config: " << e.what() << '\n';
    return 2;
  }
  try {
    if (c.command == "synth") return cmd_synth(c, out);
    if (c.command == "train") return cmd_train(c, out);
    if (c.command == "prune") return cmd_prune(c, out);
    if (c.command == "path") return cmd_path(c, out);
    if (c.command == "polish") return cmd_polish(c, out);
    if (c.command == "joint") return cmd_joint(c, out);
    if (c.command == "baseline") return cmd_baseline(c, out);
    if (c.command == "predict") return cmd_predict(c, out);
    if (c.command == "report") return cmd_report(c, out);
    return cmd_compare(c, out);
  } catch (const StageError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << c.command << ": " << e.what() << '\n';
  }
  return 1;
}

int main_entry(int argc, const char* const* argv) {
  int code = 0;
  const auto config = parse_args(argc, argv, code);
  if (!config) return code;
  return run(*config, std::cout, std::cerr);
}

}  // namespace forestprune::cli
