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


#include "exactsel/bench.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "exactsel/catalog.hpp"

namespace exactsel {

void Report::add(std::vector<std::string> row) {
  if (row.size() != header.size())
    throw Error(fmt::format("report row has {} fields, header has {}", row.size(), header.size()));
  rows.push_back(std::move(row));
}

std::string Report::csv() const {
  auto line = [](const std::vector<std::string>& fields) {
    std::string s;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) s += ',';
      bool quote = fields[i].find_first_of(",\"\n") != std::string::npos;
      if (!quote) {
        s += fields[i];
        continue;
      }
      s += '"';
      for (char c : fields[i]) {
        if (c == '"') s += '"';
        s += c;
      }
      s += '"';
    }
    return s + '\n';
  };
  std::string s = line(header);
  for (const auto& r : rows) s += line(r);
  return s;
}

std::string Report::text() const {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& r : rows)
    for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());
  auto line = [&](const std::vector<std::string>& fields) {
    std::string s;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (c) s += "  ";
      s += fmt::format("{:<{}}", fields[c], width[c]);
    }
    while (!s.empty() && s.back() == ' ') s.pop_back();
    return s + '\n';
  };
  std::string s = title.empty() ? "" : "== " + title + " ==\n";
  s += line(header);
  for (const auto& r : rows) s += line(r);
  for (const auto& n : notes) s += "# " + n + '\n';
  return s;
}

std::size_t Report::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw Error(fmt::format("report has no column '{}'", name));
}

Timing time_query(std::string_view sql, const OptimizerConfig& config, Catalog& catalog, int repeat) {
  Timing t;
  t.best_us = std::numeric_limits<double>::infinity();
  for (int i = 0; i < std::max(1, repeat); ++i) {
    auto run = run_query(sql, config, catalog);
    t.best_us = std::min(t.best_us, run.total_ms * 1000.0);
    t.last = std::move(run);
  }
  return t;
}

OptimizerConfig baseline_config(const OptimizerConfig& base) {
  auto c = base;
  c.pushdown_enabled = false;
  return c;
}

OptimizerConfig pushdown_config(const OptimizerConfig& base) {
  auto c = base;
  c.pushdown_enabled = true;
  return c;
}

namespace {

std::string substitute(std::string sql, std::string_view name, std::string_view value) {
  for (auto pos = sql.find(name); pos != std::string::npos; pos = sql.find(name, pos + value.size()))
    sql.replace(pos, name.size(), value);
  return sql;
}

std::vector<std::string> sorted_rows(const ResultSet& rs) {
  auto rows = rs.row_strings();
  std::sort(rows.begin(), rows.end());
  return rows;
}

std::string pushed_tables(const OptimizeReport& report) {
  std::string s;
  for (const auto& d : report.decisions) {
    if (d.outcome != PushDownDecision::Outcome::Pushed) continue;
    if (!s.empty()) s += ' ';
    s += d.table;
  }
  return s.empty() ? "-" : s;
}

std::string join_order_text(const OptimizeReport& report) {
  std::string s;
  for (const auto& j : report.join_order) {
    if (!s.empty()) s += ' ';
    s += j.relation;
  }
  return s;
}

/// Join tree as nested parentheses, probe input first.
std::string join_shape(const PlanNode& node) {
  if (node.kind == PlanKind::HashJoin)
    return "(" + join_shape(node.child(0)) + " JOIN " + join_shape(node.child(1)) + ")";
  if (node.kind == PlanKind::Scan || node.kind == PlanKind::TempScan) return node.alias;
  return join_shape(node.child());
}

std::string us(double v) { return fmt::format("{:.0f}", v); }

std::int64_t column_max(const Catalog& catalog, const std::string& table, const std::string& column) {
  const auto& c = catalog.table(table)->column(column);
  if (c.ints.empty()) return 0;
  return *std::max_element(c.ints.begin(), c.ints.end());
}

}  // namespace

Database make_flip_replica(const FlipReplicaSpec& spec) {
  Rng rng(spec.seed);
  const auto hot = static_cast<std::size_t>(std::llround(spec.hot_fraction * static_cast<double>(spec.r_rows)));
  std::vector<std::int64_t> ra(spec.r_rows), rb(spec.r_rows), rc(spec.r_rows), rd(spec.r_rows);
  std::size_t hot_left = hot;
  for (std::size_t i = 0; i < spec.r_rows; ++i) {
    // selection sampling: exactly `hot` rows land in the overlap
    bool is_hot = rng.below(spec.r_rows - i) < hot_left;
    if (is_hot) {
      --hot_left;
      ra[i] = 0;
      rb[i] = 50;
      rc[i] = static_cast<std::int64_t>(rng.below(2));
    } else {
      ra[i] = static_cast<std::int64_t>(rng.below(5));
      rb[i] = rng.between(100, 999);
      rc[i] = static_cast<std::int64_t>(rng.below(29));
    }
    rd[i] = static_cast<std::int64_t>(rng.below(100000));
  }
  std::vector<std::int64_t> sa(spec.s_rows), sb(spec.s_rows), se(spec.s_rows);
  for (std::size_t i = 0; i < spec.s_rows; ++i) {
    sa[i] = static_cast<std::int64_t>(i);
    sb[i] = static_cast<std::int64_t>(i % spec.t_rows);
    se[i] = static_cast<std::int64_t>(rng.below(100000));
  }
  std::vector<std::int64_t> tb(spec.t_rows), tf(spec.t_rows);
  for (std::size_t i = 0; i < spec.t_rows; ++i) {
    tb[i] = static_cast<std::int64_t>(i);
    tf[i] = static_cast<std::int64_t>(rng.below(100000));
  }
  auto int_col = [](std::string name, std::vector<std::int64_t> v) {
    Column c(std::move(name), ColumnType::Int64);
    c.ints = std::move(v);
    return c;
  };
  Database db;
  db.emplace_back("r", std::vector<Column>{int_col("ra", std::move(ra)), int_col("rb", std::move(rb)),
                                           int_col("rc", std::move(rc)), int_col("rd", std::move(rd))});
  db.emplace_back("s", std::vector<Column>{int_col("sa", std::move(sa)), int_col("sb", std::move(sb)),
                                           int_col("se", std::move(se))});
  db.emplace_back("t", std::vector<Column>{int_col("tb", std::move(tb)), int_col("tf", std::move(tf))});
  return db;
}

std::string flip_replica_selection() { return "ra = 0 AND rb < 60 AND rb > 40 AND (rc = 0 OR rc = 1)"; }

std::string flip_replica_query() {
  return "SELECT rc, rd, se, tf FROM r, s, t WHERE ra = sa AND sb = tb AND " + flip_replica_selection();
}

Report plan_flip_suite(Catalog& catalog, const BenchConfig& config) {
  Report r;
  r.title = "plan flip";
  r.header = {"estimator", "join_order", "join_tree", "r_cardinality", "join_intermediate_rows", "result_rows",
              "best_us"};
  std::uint64_t inter[2] = {0, 0};
  int k = 0;
  for (auto kind : {EstimatorKind::Uniform, EstimatorKind::Exact}) {
    auto cfg = pushdown_config(config.optimizer);
    cfg.estimator = kind;
    auto t = time_query(flip_replica_query(), cfg, catalog, config.repeat);
    const auto& report = t.last.optimized.report;
    inter[k++] = t.last.result.stats.join_intermediate_rows;
    r.add({std::string(to_string(kind)), join_order_text(report), join_shape(*t.last.optimized.plan),
           fmt::format("{:.1f}", report.cardinalities.at("r")),
           std::to_string(t.last.result.stats.join_intermediate_rows), std::to_string(t.last.result.row_count),
           us(t.best_us)});
  }
  r.notes.push_back(fmt::format("intermediate rows uniform/exact = {:.1f}",
                                inter[1] == 0 ? std::numeric_limits<double>::infinity()
                                              : static_cast<double>(inter[0]) / static_cast<double>(inter[1])));
  return r;
}

std::vector<NamedQuery> overhead_queries() {
  return {
      {"size-orders", "SELECT COUNT(*) FROM lineitem, orders WHERE l_orderkey = o_orderkey AND o_orderkey = 1"},
      {"size-partsupp",
       "SELECT COUNT(*) FROM lineitem, partsupp WHERE l_partkey = ps_partkey AND l_suppkey = ps_suppkey AND "
       "ps_partkey = 1"},
      {"size-part", "SELECT COUNT(*) FROM lineitem, part WHERE l_partkey = p_partkey AND p_partkey = 1"},
      {"size-supplier", "SELECT COUNT(*) FROM lineitem, supplier WHERE l_suppkey = s_suppkey AND s_suppkey = 1"},
      {"selectivity-eq", "SELECT COUNT(*) FROM lineitem, orders WHERE l_orderkey = o_orderkey AND o_orderkey = 1"},
      {"selectivity-ge", "SELECT COUNT(*) FROM lineitem, orders WHERE l_orderkey = o_orderkey AND o_orderkey >= 1"},
  };
}

std::vector<NamedQuery> attribute_queries(std::string_view table) {
  std::vector<std::string> preds;
  std::string prefix;
  if (table == "orders") {
    prefix = "SELECT COUNT(*) FROM lineitem, orders WHERE l_orderkey = o_orderkey";
    preds = {"o_orderkey = 1", "o_custkey = 184500", "o_orderstatus = 'O'", "o_totalprice = 218611.01",
             "o_orderdate = DATE '1996-01-02'"};
  } else if (table == "partsupp") {
    prefix = "SELECT COUNT(*) FROM lineitem, partsupp WHERE l_partkey = ps_partkey AND l_suppkey = ps_suppkey";
    preds = {"ps_partkey = 1", "ps_suppkey = 2", "ps_availqty = 3325", "ps_supplycost = 771.64"};
  } else {
    throw Error(fmt::format("no attribute sweep for table '{}'", table));
  }
  std::vector<NamedQuery> out;
  std::string sql = prefix;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    sql += " AND " + preds[i];
    out.push_back({fmt::format("{}-attrs-{}", table, i + 1), sql});
  }
  return out;
}

Report overhead_suite(Catalog& catalog, const std::vector<NamedQuery>& queries, const BenchConfig& config) {
  Report r;
  r.title = "selectivity computation overhead";
  r.header = {"query", "baseline_us", "gated_us", "overhead_us", "count_ms", "same_plan", "result"};
  auto gated = pushdown_config(config.optimizer);
  gated.max_selectivity = MaxSelectivity::ratio(0);
  auto base = baseline_config(config.optimizer);
  for (const auto& q : queries) {
    auto b = time_query(q.sql, base, catalog, config.repeat);
    auto g = time_query(q.sql, gated, catalog, config.repeat);
    double count_ms = 0;
    for (const auto& d : g.last.optimized.report.decisions) count_ms += d.count_elapsed_ms;
    bool same = same_structure(*b.last.optimized.plan, *g.last.optimized.plan);
    r.add({q.name, us(b.best_us), us(g.best_us), us(g.best_us - b.best_us), fmt::format("{:.3f}", count_ms),
           same ? "yes" : "no", b.last.result.row_count ? b.last.result.row_string(0) : ""});
  }
  return r;
}

CrossoverTarget crossover_target(std::string_view name, const Catalog& catalog) {
  if (name == "orders")
    return {"orders", "SELECT COUNT(*) FROM lineitem, orders WHERE l_orderkey = o_orderkey AND o_orderkey <= $1",
            column_max(catalog, "orders", "o_orderkey")};
  if (name == "partsupp")
    return {"partsupp",
            "SELECT COUNT(*) FROM lineitem, partsupp WHERE l_partkey = ps_partkey AND ps_partkey <= $1",
            column_max(catalog, "partsupp", "ps_partkey")};
  if (name == "partsupp2")
    return {"partsupp2",
            "SELECT COUNT(*) FROM lineitem, partsupp WHERE l_partkey = ps_partkey AND l_suppkey = ps_suppkey AND "
            "ps_partkey <= $1",
            column_max(catalog, "partsupp", "ps_partkey")};
  if (name == "part")
    return {"part", "SELECT COUNT(*) FROM lineitem, part WHERE l_partkey = p_partkey AND p_partkey <= $1",
            column_max(catalog, "part", "p_partkey")};
  throw Error(fmt::format("unknown crossover table '{}' (orders, partsupp, partsupp2, part)", name));
}

std::vector<double> default_selectivities() { return {0.0001, 0.001, 0.01, 0.05, 0.1, 0.25, 0.5, 0.75, 1.0}; }

Report crossover_suite(Catalog& catalog, const CrossoverTarget& target, const std::vector<double>& selectivities,
                       const BenchConfig& config) {
  Report r;
  r.title = "crossover on " + target.name;
  r.header = {"selectivity", "bound", "selected_rows", "baseline_us", "pushdown_us", "speedup", "pushed",
              "materialized_rows", "join_tree", "results_match"};
  auto spd = pushdown_config(config.optimizer);
  spd.max_selectivity = MaxSelectivity::ratio(1.0);
  auto base = baseline_config(config.optimizer);
  std::optional<double> last_faster, first_slower;
  for (double sel : selectivities) {
    auto bound = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::llround(sel * static_cast<double>(target.key_max))));
    auto sql = substitute(target.sql, "$1", std::to_string(bound));
    auto b = time_query(sql, base, catalog, config.repeat);
    auto p = time_query(sql, spd, catalog, config.repeat);
    const auto& rep = p.last.optimized.report;
    double selected = 0;
    for (const auto& d : rep.decisions)
      if (d.selectivity) selected = *d.selectivity;
    bool match = sorted_rows(b.last.result) == sorted_rows(p.last.result);
    r.add({fmt::format("{}", sel), std::to_string(bound), fmt::format("{:.0f}", selected), us(b.best_us),
           us(p.best_us), fmt::format("{:.2f}", b.best_us / p.best_us), pushed_tables(rep),
           std::to_string(rep.stats.intermediate_rows_materialized), join_shape(*p.last.optimized.plan),
           match ? "yes" : "no"});
    if (p.best_us < b.best_us && !first_slower) last_faster = sel;
    if (p.best_us >= b.best_us && !first_slower) first_slower = sel;
  }
  if (last_faster && first_slower)
    r.notes.push_back(fmt::format("push-down faster up to selectivity {}, not faster from {}", *last_faster,
                                  *first_slower));
  else if (last_faster)
    r.notes.push_back("push-down faster at every measured selectivity");
  else
    r.notes.push_back("push-down never faster");
  return r;
}

Report comparison_suite(Catalog& catalog, const std::vector<NamedQuery>& queries, const BenchConfig& config,
                        std::string title) {
  Report r;
  r.title = std::move(title);
  r.header = {"query", "baseline_us", "pushdown_us", "speedup", "pushed", "result_rows", "results_match"};
  auto spd = pushdown_config(config.optimizer);
  auto base = baseline_config(config.optimizer);
  for (const auto& q : queries) {
    auto b = time_query(q.sql, base, catalog, config.repeat);
    auto p = time_query(q.sql, spd, catalog, config.repeat);
    bool match = sorted_rows(b.last.result) == sorted_rows(p.last.result);
    r.add({q.name, us(b.best_us), us(p.best_us), fmt::format("{:.2f}", b.best_us / p.best_us),
           pushed_tables(p.last.optimized.report), std::to_string(p.last.result.row_count), match ? "yes" : "no"});
  }
  return r;
}

std::vector<NamedQuery> consecutive_join_queries(const Catalog& catalog, double selectivity) {
  auto bound = [&](const std::string& table, const std::string& col) {
    return std::to_string(std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::llround(selectivity * static_cast<double>(column_max(catalog, table, col))))));
  };
  struct Step {
    std::string table, joins, selection;
  };
  std::vector<Step> steps = {
      {"orders", "l_orderkey = o_orderkey", "o_orderkey <= " + bound("orders", "o_orderkey")},
      {"partsupp", "l_partkey = ps_partkey AND l_suppkey = ps_suppkey",
       "ps_partkey <= " + bound("partsupp", "ps_partkey")},
      {"part", "ps_partkey = p_partkey", "p_partkey <= " + bound("part", "p_partkey")},
      {"customer", "o_custkey = c_custkey", "c_custkey <= " + bound("customer", "c_custkey")},
      {"supplier", "ps_suppkey = s_suppkey", "s_suppkey <= " + bound("supplier", "s_suppkey")},
  };
  std::vector<NamedQuery> out;
  std::string from = "lineitem", joins, sels;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    from += ", " + steps[i].table;
    joins += (joins.empty() ? "" : " AND ") + steps[i].joins;
    sels += " AND " + steps[i].selection;
    out.push_back({fmt::format("joins-{}-sel-{}", i + 1, selectivity),
                   fmt::format("SELECT COUNT(*) FROM {} WHERE {}{}", from, joins, sels)});
  }
  return out;
}

std::vector<NamedQuery> tpch_appendix_queries() {
  return {
      {"tpch-q3",
       "SELECT l_orderkey, SUM(l_extendedprice * (1 - l_discount)) AS revenue, o_orderdate "
       "FROM customer, orders, lineitem "
       "WHERE c_mktsegment = 'BUILDING' AND c_custkey = o_custkey AND l_orderkey = o_orderkey "
       "AND o_orderdate < DATE '1992-02-01' AND l_shipdate > DATE '1992-02-01' "
       "GROUP BY l_orderkey, o_orderdate ORDER BY revenue DESC, o_orderdate LIMIT 10"},
      {"tpch-q5",
       "SELECT n_name, SUM(l_extendedprice * (1 - l_discount)) AS revenue "
       "FROM customer, orders, lineitem, supplier, nation, region "
       "WHERE c_custkey = o_custkey AND l_orderkey = o_orderkey AND l_suppkey = s_suppkey "
       "AND c_nationkey = s_nationkey AND s_nationkey = n_nationkey AND n_regionkey = r_regionkey "
       "AND r_name = 'AFRICA' AND o_orderdate >= DATE '1993-01-01' AND o_orderdate < DATE '1994-01-01' "
       "GROUP BY n_name ORDER BY revenue DESC"},
      {"tpch-q10",
       "SELECT c_custkey, c_name, SUM(l_extendedprice * (1 - l_discount)) AS revenue, "
       "c_acctbal, n_name, c_address, c_phone, c_comment "
       "FROM customer, orders, lineitem, nation "
       "WHERE c_custkey = o_custkey AND l_orderkey = o_orderkey "
       "AND o_orderdate >= DATE '1993-07-01' AND o_orderdate < DATE '1993-10-01' "
       "AND l_returnflag = 'R' AND c_nationkey = n_nationkey "
       "GROUP BY c_custkey, c_name, c_acctbal, c_phone, n_name, c_address, c_comment "
       "ORDER BY revenue DESC LIMIT 20"},
  };
}

std::vector<NamedQuery> ssb_appendix_queries() {
  const std::string q2 =
      "SELECT SUM(lo_revenue), d_year, p_brand1 FROM lineorder, part, supplier, ddate "
      "WHERE lo_orderdate = d_datekey AND lo_partkey = p_partkey AND lo_suppkey = s_suppkey AND ";
  const std::string q2_tail = " GROUP BY d_year, p_brand1 ORDER BY d_year, p_brand1";
  const std::string q3_from =
      " FROM lineorder, customer, supplier, ddate "
      "WHERE lo_custkey = c_custkey AND lo_suppkey = s_suppkey AND lo_orderdate = d_datekey AND ";
  const std::string q4_from =
      " FROM lineorder, supplier, customer, part, ddate "
      "WHERE lo_custkey = c_custkey AND lo_suppkey = s_suppkey AND lo_partkey = p_partkey "
      "AND lo_orderdate = d_datekey AND ";
  return {
      {"ssb-q2.1", q2 + "p_category = 12 AND s_region = 1" + q2_tail},
      {"ssb-q2.2", q2 + "p_brand1 >= 2221 AND p_brand1 <= 2228 AND s_region = 2" + q2_tail},
      {"ssb-q2.3", q2 + "p_brand1 = 2239 AND s_region = 3" + q2_tail},
      {"ssb-q3.1", "SELECT c_nation, s_nation, d_year, SUM(lo_revenue) AS revenue" + q3_from +
                       "c_region = 2 AND s_region = 2 AND d_year >= 1992 AND d_year <= 1997 "
                       "GROUP BY c_nation, s_nation, d_year ORDER BY d_year ASC, revenue DESC"},
      {"ssb-q3.2", "SELECT c_city, s_city, d_year, SUM(lo_revenue) AS revenue" + q3_from +
                       "c_nation = 24 AND s_nation = 24 AND d_year >= 1992 AND d_year <= 1997 "
                       "GROUP BY c_city, s_city, d_year ORDER BY d_year ASC, revenue DESC"},
      {"ssb-q3.3", "SELECT c_city, s_city, d_year, SUM(lo_revenue) AS revenue" + q3_from +
                       "(c_city = 231 OR c_city = 235) AND (s_city = 231 OR s_city = 235) "
                       "AND d_year >= 1992 AND d_year <= 1997 "
                       "GROUP BY c_city, s_city, d_year ORDER BY d_year ASC, revenue DESC"},
      {"ssb-q3.4", "SELECT c_city, s_city, d_year, SUM(lo_revenue) AS revenue" + q3_from +
                       "(c_city = 231 OR c_city = 235) AND (s_city = 231 OR s_city = 235) "
                       "AND d_yearmonthnum = 199712 "
                       "GROUP BY c_city, s_city, d_year ORDER BY d_year ASC, revenue DESC"},
      {"ssb-q4.1", "SELECT d_year, c_nation, SUM(lo_revenue - lo_supplycost) AS profit" + q4_from +
                       "c_region = 1 AND s_region = 1 AND (p_mfgr = 1 OR p_mfgr = 2) "
                       "GROUP BY d_year, c_nation ORDER BY d_year, c_nation"},
      {"ssb-q4.2", "SELECT d_year, s_nation, p_category, SUM(lo_revenue - lo_supplycost) AS profit" + q4_from +
                       "c_region = 1 AND s_region = 1 AND (d_year = 1997 OR d_year = 1998) "
                       "AND (p_mfgr = 1 OR p_mfgr = 2) "
                       "GROUP BY d_year, s_nation, p_category ORDER BY d_year, s_nation, p_category"},
      {"ssb-q4.3", "SELECT d_year, s_city, p_brand1, SUM(lo_revenue - lo_supplycost) AS profit" + q4_from +
                       "c_region = 1 AND s_nation = 24 AND (d_year = 1997 OR d_year = 1998) AND p_category = 14 "
                       "GROUP BY d_year, s_city, p_brand1 ORDER BY d_year, s_city, p_brand1"},
  };
}

std::vector<NamedQuery> correlated_corpus() {
  return {
      {"flip-r", "SELECT COUNT(*) FROM r WHERE " + flip_replica_selection()},
      {"orders-status-date", "SELECT COUNT(*) FROM orders WHERE o_orderstatus = 'F' AND o_orderdate < DATE '1995-06-17'"},
      {"orders-status-date-disjoint",
       "SELECT COUNT(*) FROM orders WHERE o_orderstatus = 'O' AND o_orderdate < DATE '1995-06-17'"},
      {"lineitem-flag-ship",
       "SELECT COUNT(*) FROM lineitem WHERE l_returnflag = 'R' AND l_shipdate < DATE '1995-06-17'"},
      {"customer-segment-nation",
       "SELECT COUNT(*) FROM customer WHERE c_nationkey = 5 AND c_mktsegment = 'AUTOMOBILE'"},
  };
}

std::vector<NamedQuery> independent_corpus() {
  return {
      {"orders-status", "SELECT COUNT(*) FROM orders WHERE o_orderstatus = 'O'"},
      {"orders-date-price",
       "SELECT COUNT(*) FROM orders WHERE o_orderdate < DATE '1994-01-01' AND o_totalprice > 200000.0"},
      {"orders-status-or-price",
       "SELECT COUNT(*) FROM orders WHERE (o_orderstatus = 'F' OR o_orderstatus = 'P') AND o_totalprice < 300000.0"},
      {"lineitem-flag-qty", "SELECT COUNT(*) FROM lineitem WHERE l_returnflag = 'R' AND l_quantity < 20"},
      {"customer-segment-nation",
       "SELECT COUNT(*) FROM customer WHERE c_mktsegment = 'BUILDING' AND c_nationkey = 3"},
  };
}

namespace {

bool row_matches(const PredicateExpr& p, const Table& table, std::size_t row) {
  switch (p.kind) {
    case PredicateExpr::Kind::And:
      for (const auto& c : p.children)
        if (!row_matches(c, table, row)) return false;
      return true;
    case PredicateExpr::Kind::Or:
      for (const auto& c : p.children)
        if (row_matches(c, table, row)) return true;
      return false;
    case PredicateExpr::Kind::ColumnEq: {
      const auto& a = table.column(p.column.column);
      const auto& b = table.column(p.other.column);
      return stores_integers(a.type) ? a.ints[row] == b.ints[row] : a.floats[row] == b.floats[row];
    }
    case PredicateExpr::Kind::Compare: {
      const auto& c = table.column(p.column.column);
      double v = stores_integers(c.type) ? static_cast<double>(c.ints[row]) : c.floats[row];
      double lit = p.literal.type == ColumnType::Float64 ? p.literal.float_value
                                                         : static_cast<double>(p.literal.int_value);
      switch (p.op) {
        case CompareOp::Eq: return v == lit;
        case CompareOp::Lt: return v < lit;
        case CompareOp::Gt: return v > lit;
        case CompareOp::Le: return v <= lit;
        case CompareOp::Ge: return v >= lit;
      }
    }
  }
  return false;
}

}  // namespace

std::uint64_t brute_force_count(const Table& table, const PredicateExpr& pred) {
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < table.row_count(); ++i) n += row_matches(pred, table, i);
  return n;
}

Report estimation_error_suite(Catalog& catalog, const std::vector<NamedQuery>& corpus,
                              const std::vector<EstimatorKind>& kinds, const SynopsisParams& params,
                              std::string title) {
  Report r;
  r.title = std::move(title);
  r.header = {"query", "table", "estimator", "estimate", "truth", "est_factor", "true_factor", "rel_error",
              "q_error"};
  Executor executor(catalog);
  for (const auto& q : corpus) {
    auto raw = parse(q.sql, catalog);
    if (raw.tables.size() != 1 || !raw.where) throw Error(fmt::format("corpus query {} must filter one table", q.name));
    const auto& table = raw.tables.front();
    auto truth = static_cast<double>(brute_force_count(*catalog.table(table), *raw.where));
    auto rows = static_cast<double>(catalog.meta(table).row_count);
    for (auto kind : kinds) {
      auto e = estimate(*raw.where, table, kind, catalog, executor, params);
      double rel = truth > 0 ? std::abs(e.cardinality - truth) / truth
                             : (e.cardinality > 0 ? std::numeric_limits<double>::infinity() : 0.0);
      double a = std::max(e.cardinality, 1.0), b = std::max(truth, 1.0);
      r.add({q.name, table, std::string(to_string(kind)), fmt::format("{:.1f}", e.cardinality),
             fmt::format("{:.0f}", truth), fmt::format("{:.6f}", e.factor),
             fmt::format("{:.6f}", rows > 0 ? truth / rows : 0.0), fmt::format("{:.4f}", rel),
             fmt::format("{:.2f}", std::max(a / b, b / a))});
    }
  }
  return r;
}

}  // namespace exactsel
