/*
 * Copyright 2026 The exactsel Authors
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


#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <fmt/format.h>

#include "exactsel/bench.hpp"
#include "exactsel/catalog.hpp"
#include "exactsel/csv.hpp"
#include "exactsel/generator.hpp"
#include "exactsel/optimizer.hpp"

namespace fs = std::filesystem;
using namespace exactsel;

namespace {

struct DataOptions {
  std::string data_dir;
  std::string schema = "tpch_lite";
  double scale = 0.01;
  double skew = 0;
  double correlation = 0;
  std::uint64_t seed = 1;

  GeneratorSpec spec() const { return {parse_schema_kind(schema), scale, skew, correlation, seed}; }
};

void add_data_options(CLI::App* app, DataOptions& d) {
  app->add_option("--data", d.data_dir, "Directory of <table>.csv files with <table>.schema sidecars");
  app->add_option("--schema", d.schema, "Generated schema when --data is absent: tpch_lite or ssb_lite");
  app->add_option("--scale", d.scale, "Scale of the generated database");
  app->add_option("--skew", d.skew, "Zipf exponent of generated keys and attributes");
  app->add_option("--correlation", d.correlation, "Correlation of the designated attribute pairs, in [0, 1]");
  app->add_option("--seed", d.seed, "Seed for data generation and synopses");
}

Database load_directory(const fs::path& dir) {
  Database db;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".csv") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    auto schema_path = fs::path(f).replace_extension(".schema");
    std::ifstream in(schema_path);
    if (!in) throw Error(fmt::format("missing schema file {}", schema_path.string()));
    std::stringstream text;
    text << in.rdbuf();
    auto s = text.str();
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r' || s.back() == ' ')) s.pop_back();
    db.push_back(load_csv(f, parse_schema(s), f.stem().string()));
  }
  if (db.empty()) throw Error(fmt::format("no .csv files in {}", dir.string()));
  return db;
}

Database obtain(const DataOptions& d) { return d.data_dir.empty() ? generate(d.spec()) : load_directory(d.data_dir); }

void register_all(Catalog& catalog, Database db) {
  for (auto& t : db) catalog.register_table(std::move(t));
}

struct PlannerOptions {
  std::string config_file;
  std::string pushdown;
  std::string estimator;
  std::optional<std::size_t> min_table_size;
  std::string max_selectivity;
  std::optional<std::uint64_t> max_rows;
  std::optional<std::size_t> buckets;
  std::optional<double> sample_rate;
};

void add_planner_options(CLI::App* app, PlannerOptions& p) {
  app->add_option("--config", p.config_file, "key = value file: estimator, pushdown.enabled, "
                                             "pushdown.min_table_size, pushdown.max_selectivity, executor.max_rows");
  app->add_option("--pushdown", p.pushdown, "Selection push-down: on or off")->check(CLI::IsMember({"on", "off"}));
  app->add_option("--estimator", p.estimator, "exact, uniform, equiwidth, equidepth, cms or sample");
  app->add_option("--min-table-size", p.min_table_size, "Only tables with more rows are pushed down");
  app->add_option("--max-selectivity", p.max_selectivity, "Ratio such as 0.05, or absolute rows such as 3300000abs");
  app->add_option("--max-rows", p.max_rows, "Row cap of any operator output");
  app->add_option("--buckets", p.buckets, "Histogram bucket count");
  app->add_option("--sample-rate", p.sample_rate, "Sampling estimator rate in (0, 1]");
}

void apply_setting(OptimizerConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "estimator")
    cfg.estimator = parse_estimator_kind(value);
  else if (key == "pushdown.enabled")
    cfg.pushdown_enabled = value == "on" || value == "true" || value == "1";
  else if (key == "pushdown.min_table_size")
    cfg.min_table_size = std::stoull(value);
  else if (key == "pushdown.max_selectivity")
    cfg.max_selectivity = MaxSelectivity::parse(value);
  else if (key == "executor.max_rows")
    cfg.executor.max_rows = std::stoull(value);
  else if (key == "synopsis.buckets")
    cfg.synopsis.buckets = std::stoull(value);
  else if (key == "synopsis.sample_rate")
    cfg.synopsis.sample_rate = std::stod(value);
  else
    throw Error(fmt::format("unknown config key '{}'", key));
}

void read_config_file(OptimizerConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(fmt::format("cannot open config file {}", path));
  std::string line;
  int n = 0;
  auto trim = [](std::string s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++n;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(fmt::format("{}:{}: expected key = value", path, n));
    apply_setting(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

OptimizerConfig make_config(const PlannerOptions& p, std::uint64_t seed) {
  OptimizerConfig cfg;
  cfg.seed = seed;
  cfg.synopsis.seed = seed;
  if (!p.config_file.empty()) read_config_file(cfg, p.config_file);
  if (!p.pushdown.empty()) cfg.pushdown_enabled = p.pushdown == "on";
  if (!p.estimator.empty()) cfg.estimator = parse_estimator_kind(p.estimator);
  if (p.min_table_size) cfg.min_table_size = *p.min_table_size;
  if (!p.max_selectivity.empty()) cfg.max_selectivity = MaxSelectivity::parse(p.max_selectivity);
  if (p.max_rows) cfg.executor.max_rows = *p.max_rows;
  if (p.buckets) cfg.synopsis.buckets = *p.buckets;
  if (p.sample_rate) cfg.synopsis.sample_rate = *p.sample_rate;
  return cfg;
}

void print_result(const ResultSet& rs) {
  std::string header;
  for (std::size_t i = 0; i < rs.schema.size(); ++i) {
    if (i) header += '|';
    header += rs.schema[i].table.empty() ? rs.schema[i].column : rs.schema[i].qualified();
  }
  fmt::print("{}\n", header);
  for (std::size_t r = 0; r < rs.row_count; ++r) fmt::print("{}\n", rs.row_string(r));
  fmt::print("({} row{})\n", rs.row_count, rs.row_count == 1 ? "" : "s");
}

void print_stats(const ExecStats& s) {
  fmt::print("rows_probed={} rows_built={} predicate_evals={} intermediate_rows_materialized={} "
             "join_intermediate_rows={}\n",
             s.rows_probed, s.rows_built, s.predicate_evals, s.intermediate_rows_materialized,
             s.join_intermediate_rows);
  for (const auto& [t, n] : s.predicate_evals_by_table) fmt::print("predicate_evals[{}]={}\n", t, n);
  for (const auto& op : s.operators) fmt::print("  {} rows={} us={:.1f}\n", op.op, op.rows_out, op.elapsed_us);
}

void emit(const Report& r, const std::string& out) {
  fmt::print("{}", r.text());
  if (out.empty()) return;
  std::ofstream f(out, std::ios::app);
  if (!f) throw Error(fmt::format("cannot write {}", out));
  f << r.csv();
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exactsel: in-memory columnar engine with COUNT-driven selection push-down"};
  app.require_subcommand(1);

  DataOptions gen_data;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Generate a database as CSV files");
  add_data_options(gen, gen_data);
  gen->add_option("--out", gen_out, "Output directory")->required();

  DataOptions load_data;
  auto* load = app.add_subcommand("load", "Load a database and print table sizes");
  add_data_options(load, load_data);

  DataOptions query_data;
  PlannerOptions query_planner;
  std::string sql;
  bool explain_flag = false, stats_flag = false;
  auto* query = app.add_subcommand("query", "Optimize and run one query");
  query->add_option("sql", sql, "SQL text")->required();
  add_data_options(query, query_data);
  add_planner_options(query, query_planner);
  query->add_flag("--explain", explain_flag, "Print the push-down report and the plan");
  query->add_flag("--stats", stats_flag, "Print executor counters");

  DataOptions bench_data;
  PlannerOptions bench_planner;
  std::string suite, bench_table = "orders", bench_out, selectivities, appendix = "tpch";
  int repeat = 5;
  auto* bench = app.add_subcommand("bench", "Run a benchmark suite");
  bench->add_option("suite", suite, "plan-flip, overhead, crossover, attributes, consecutive, appendix, estimation")
      ->required()
      ->check(CLI::IsMember({"plan-flip", "overhead", "crossover", "attributes", "consecutive", "appendix",
                             "estimation"}));
  add_data_options(bench, bench_data);
  add_planner_options(bench, bench_planner);
  bench->add_option("--repeat", repeat, "Runs per measurement; the best is reported")->check(CLI::PositiveNumber);
  bench->add_option("--table", bench_table, "crossover: orders, partsupp, partsupp2, part; attributes: orders, partsupp");
  bench->add_option("--selectivities", selectivities, "Comma-separated selectivities for crossover / consecutive");
  bench->add_option("--suite-schema", appendix, "appendix: tpch or ssb")->check(CLI::IsMember({"tpch", "ssb"}));
  bench->add_option("--out", bench_out, "Append CSV output to this file");

  DataOptions stats_data;
  std::string stats_table, stats_column, stats_kind;
  std::size_t stats_buckets = 100;
  auto* stats = app.add_subcommand("stats", "Print catalog metadata of a table");
  stats->add_option("table", stats_table, "Table name")->required();
  add_data_options(stats, stats_data);
  stats->add_option("--column", stats_column, "Column to build a synopsis over");
  stats->add_option("--synopsis", stats_kind, "equiwidth, equidepth, cms or sample")
      ->check(CLI::IsMember({"equiwidth", "equidepth", "cms", "sample"}));
  stats->add_option("--buckets", stats_buckets, "Histogram bucket count");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      fs::create_directories(gen_out);
      for (const auto& t : generate(gen_data.spec())) {
        write_csv(t, fs::path(gen_out) / (t.name() + ".csv"));
        std::ofstream(fs::path(gen_out) / (t.name() + ".schema")) << format_schema(schema_of(t)) << '\n';
        fmt::print("{} {} rows\n", t.name(), t.row_count());
      }
    } else if (*load) {
      for (const auto& t : obtain(load_data)) fmt::print("{} {} rows checksum={:016x}\n", t.name(), t.row_count(), t.checksum());
    } else if (*query) {
      Catalog catalog;
      register_all(catalog, obtain(query_data));
      auto cfg = make_config(query_planner, query_data.seed);
      auto run = run_query(sql, cfg, catalog);
      print_result(run.result);
      if (explain_flag) fmt::print("{}{}\n", run.optimized.report.to_string(), explain(*run.optimized.plan));
      if (stats_flag) print_stats(run.result.stats);
      fmt::print("optimize_ms={:.3f} execute_ms={:.3f} total_ms={:.3f}\n", run.optimize_ms, run.execute_ms,
                 run.total_ms);
    } else if (*bench) {
      BenchConfig config;
      config.repeat = repeat;
      config.optimizer = make_config(bench_planner, bench_data.seed);
      Catalog catalog;
      if (suite == "plan-flip") {
        register_all(catalog, make_flip_replica({.seed = bench_data.seed}));
        emit(plan_flip_suite(catalog, config), bench_out);
      } else if (suite == "estimation") {
        std::vector<EstimatorKind> kinds = {EstimatorKind::Exact, EstimatorKind::Uniform, EstimatorKind::EquiWidth,
                                            EstimatorKind::EquiDepth, EstimatorKind::CountMin, EstimatorKind::Sample};
        auto corr = bench_data.spec();
        corr.kind = SchemaKind::TpchLite;
        corr.correlation = 1.0;
        register_all(catalog, generate(corr));
        register_all(catalog, make_flip_replica({.seed = bench_data.seed}));
        emit(estimation_error_suite(catalog, correlated_corpus(), kinds, config.optimizer.synopsis,
                                    "estimation error, correlated"),
             bench_out);
        Catalog indep;
        auto ind = corr;
        ind.correlation = 0.0;
        register_all(indep, generate(ind));
        emit(estimation_error_suite(indep, independent_corpus(), kinds, config.optimizer.synopsis,
                                    "estimation error, independent"),
             bench_out);
      } else {
        auto data = bench_data;
        if (suite == "appendix") data.schema = appendix == "ssb" ? "ssb_lite" : "tpch_lite";
        register_all(catalog, obtain(data));
        if (suite == "overhead") {
          auto qs = overhead_queries();
          auto attrs = attribute_queries("orders");
          qs.insert(qs.end(), attrs.begin(), attrs.begin() + 4);
          emit(overhead_suite(catalog, qs, config), bench_out);
        } else if (suite == "crossover") {
          auto sels = selectivities.empty() ? default_selectivities() : parse_list(selectivities);
          emit(crossover_suite(catalog, crossover_target(bench_table, catalog), sels, config), bench_out);
        } else if (suite == "attributes") {
          emit(comparison_suite(catalog, attribute_queries(bench_table), config, "attributes on " + bench_table),
               bench_out);
        } else if (suite == "consecutive") {
          auto sels = selectivities.empty() ? std::vector<double>{0.01, 0.05} : parse_list(selectivities);
          for (double s : sels)
            emit(comparison_suite(catalog, consecutive_join_queries(catalog, s), config,
                                  fmt::format("consecutive joins, selectivity {}", s)),
                 bench_out);
        } else {
          emit(comparison_suite(catalog, appendix == "ssb" ? ssb_appendix_queries() : tpch_appendix_queries(), config,
                                "appendix " + appendix),
               bench_out);
        }
      }
    } else if (*stats) {
      Catalog catalog;
      register_all(catalog, obtain(stats_data));
      const auto& meta = catalog.meta(stats_table);
      fmt::print("table {} rows={}\n", meta.name, meta.row_count);
      for (const auto& [col, v] : meta.distinct_counts) fmt::print("  V({}) = {}\n", col, v);
      if (!stats_kind.empty()) {
        if (stats_column.empty()) throw Error("--synopsis needs --column");
        SynopsisParams params;
        params.buckets = stats_buckets;
        params.seed = stats_data.seed;
        SynopsisKind kind = stats_kind == "equiwidth"   ? SynopsisKind::EquiWidth
                            : stats_kind == "equidepth" ? SynopsisKind::EquiDepth
                            : stats_kind == "cms"       ? SynopsisKind::CountMin
                                                        : SynopsisKind::Sample;
        const auto& syn = catalog.build_synopsis(stats_table, stats_column, kind, params);
        if (const auto* h = std::get_if<Histogram>(&syn)) {
          for (const auto& b : h->buckets())
            fmt::print("  [{}, {}] count={} distinct={}\n", b.lo, b.hi, b.count, b.distinct);
        } else if (const auto* s = std::get_if<CountMinSketch>(&syn)) {
          fmt::print("  count-min {}x{} total={}\n", s->depth(), s->width(), s->total());
        } else if (const auto* s = std::get_if<RowSample>(&syn)) {
          fmt::print("  sample {} of {} rows\n", s->sample_size(), s->population_size());
        }
      }
    }
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 0;
}
