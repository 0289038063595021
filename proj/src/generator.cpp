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

#include "exactsel/generator.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>

#include <fmt/format.h>

namespace exactsel {

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) return 0;
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(engine_()) * n) >> 64);
}

std::int64_t Rng::between(std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
}

double Rng::unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

ZipfSampler::ZipfSampler(std::size_t n, double exponent) : n_(n) {
  if (exponent < 0) throw Error("skew must be >= 0");
  if (exponent == 0.0 || n <= 1) return;
  cdf_.resize(n);
  double acc = 0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += 1.0 / std::pow(static_cast<double>(i + 1), exponent);
    cdf_[i] = acc;
  }
  for (auto& v : cdf_) v /= acc;
}

std::size_t ZipfSampler::operator()(Rng& rng) const {
  if (cdf_.empty()) return static_cast<std::size_t>(rng.below(n_));
  double u = rng.unit();
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), n_ - 1);
}

SchemaKind parse_schema_kind(std::string_view name) {
  if (name == "tpch_lite") return SchemaKind::TpchLite;
  if (name == "ssb_lite") return SchemaKind::SsbLite;
  throw Error(fmt::format("unknown schema kind '{}'", name));
}

namespace {

struct BaseSize {
  std::string_view table;
  double rows;
  bool fixed;
};

// Scale-1 proportions. orders/partsupp/part/supplier follow the TPC-H ratios;
// lineitem and customer use the standard TPC-H multipliers, SSB the standard
// SSB ones.
constexpr std::array kTpchSizes{
    BaseSize{"region", 5, true},          BaseSize{"nation", 25, true},
    BaseSize{"supplier", 10'000, false},  BaseSize{"customer", 150'000, false},
    BaseSize{"part", 200'000, false},     BaseSize{"partsupp", 800'000, false},
    BaseSize{"orders", 1'500'000, false}, BaseSize{"lineitem", 6'000'000, false},
};
constexpr std::array kSsbSizes{
    BaseSize{"ddate", 2557, true},        BaseSize{"supplier", 2'000, false},
    BaseSize{"customer", 30'000, false},  BaseSize{"part", 200'000, false},
    BaseSize{"lineorder", 6'000'000, false},
};

constexpr std::array<std::string_view, 5> kRegions{"AFRICA", "AMERICA", "ASIA", "EUROPE", "MIDDLE EAST"};
constexpr std::array<std::string_view, 25> kNations{
    "ALGERIA", "ARGENTINA", "BRAZIL",  "CANADA",  "EGYPT",        "ETHIOPIA", "FRANCE",
    "GERMANY", "INDIA",     "INDONESIA", "IRAN",  "IRAQ",         "JAPAN",    "JORDAN",
    "KENYA",   "MOROCCO",   "MOZAMBIQUE", "PERU", "CHINA",        "ROMANIA",  "SAUDI ARABIA",
    "VIETNAM", "RUSSIA",    "UNITED KINGDOM", "UNITED STATES"};
constexpr std::array<int, 25> kNationRegion{0, 1, 1, 1, 4, 0, 3, 3, 2, 2, 4, 4, 2,
                                            4, 0, 0, 0, 1, 2, 3, 4, 2, 3, 3, 1};
constexpr std::array<std::string_view, 5> kSegments{"AUTOMOBILE", "BUILDING", "FURNITURE", "HOUSEHOLD",
                                                    "MACHINERY"};

// Independent stream per table so generation order does not matter.
Rng table_rng(std::uint64_t seed, std::string_view table) {
  std::uint64_t h = seed ^ 0x9e3779b97f4a7c15ULL;
  for (char c : table) h = (h ^ static_cast<unsigned char>(c)) * 0x100000001b3ULL;
  return Rng(h);
}

Column int_column(std::string name, std::vector<std::int64_t> values, ColumnType type = ColumnType::Int64) {
  Column c(std::move(name), type);
  c.ints = std::move(values);
  return c;
}

Column float_column(std::string name, std::vector<double> values) {
  Column c(std::move(name), ColumnType::Float64);
  c.floats = std::move(values);
  return c;
}

/// Text column whose dictionary is the fixed `domain` (codes = domain order).
template <typename Domain>
Column text_column(std::string name, const Domain& domain, std::vector<std::int64_t> codes) {
  auto dict = std::make_shared<Dictionary>();
  for (const auto& v : domain) dict->intern(v);
  Column c;
  c.name = std::move(name);
  c.type = ColumnType::Text;
  c.dictionary = std::move(dict);
  c.ints = std::move(codes);
  return c;
}

/// Text column with one generated string per row.
Column unique_text_column(std::string name, std::size_t rows, const auto& make) {
  auto dict = std::make_shared<Dictionary>();
  std::vector<std::int64_t> codes(rows);
  for (std::size_t i = 0; i < rows; ++i) codes[i] = dict->intern(make(i));
  Column c;
  c.name = std::move(name);
  c.type = ColumnType::Text;
  c.dictionary = std::move(dict);
  c.ints = std::move(codes);
  return c;
}

double cents(std::int64_t c) { return static_cast<double>(c) / 100.0; }

const std::int64_t kStartDate = parse_date("1992-01-01");
const std::int64_t kLastOrderDate = parse_date("1998-08-02");
const std::int64_t kStatusCutoff = parse_date("1995-06-17");

Database generate_tpch(const GeneratorSpec& spec) {
  const auto n_supp = scaled_rows(spec.kind, "supplier", spec.scale);
  const auto n_cust = scaled_rows(spec.kind, "customer", spec.scale);
  const auto n_part = scaled_rows(spec.kind, "part", spec.scale);
  const auto n_ps = scaled_rows(spec.kind, "partsupp", spec.scale);
  const auto n_ord = scaled_rows(spec.kind, "orders", spec.scale);
  const auto n_li = scaled_rows(spec.kind, "lineitem", spec.scale);
  const double skew = spec.skew;
  const double rho = spec.correlation;
  Database db;

  {
    std::vector<std::int64_t> keys(5), names(5);
    for (int i = 0; i < 5; ++i) keys[i] = names[i] = i;
    db.emplace_back("region", std::vector<Column>{int_column("r_regionkey", keys),
                                                  text_column("r_name", kRegions, names)});
  }
  {
    std::vector<std::int64_t> keys(25), names(25), regions(25);
    for (int i = 0; i < 25; ++i) {
      keys[i] = names[i] = i;
      regions[i] = kNationRegion[i];
    }
    db.emplace_back("nation",
                    std::vector<Column>{int_column("n_nationkey", keys), text_column("n_name", kNations, names),
                                        int_column("n_regionkey", regions)});
  }
  ZipfSampler nation_pick(25, skew);
  {
    auto rng = table_rng(spec.seed, "supplier");
    std::vector<std::int64_t> key(n_supp), nation(n_supp);
    std::vector<double> bal(n_supp);
    for (std::size_t i = 0; i < n_supp; ++i) {
      key[i] = static_cast<std::int64_t>(i + 1);
      nation[i] = static_cast<std::int64_t>(nation_pick(rng));
      bal[i] = cents(rng.between(-99999, 999999));
    }
    db.emplace_back("supplier", std::vector<Column>{int_column("s_suppkey", std::move(key)),
                                                    int_column("s_nationkey", std::move(nation)),
                                                    float_column("s_acctbal", std::move(bal))});
  }
  {
    auto rng = table_rng(spec.seed, "customer");
    ZipfSampler segment_pick(kSegments.size(), skew);
    std::vector<std::int64_t> key(n_cust), nation(n_cust), segment(n_cust);
    std::vector<double> bal(n_cust);
    for (std::size_t i = 0; i < n_cust; ++i) {
      key[i] = static_cast<std::int64_t>(i + 1);
      nation[i] = static_cast<std::int64_t>(nation_pick(rng));
      bal[i] = cents(rng.between(-99999, 999999));
      if (rng.unit() < rho)
        segment[i] = nation[i] % static_cast<std::int64_t>(kSegments.size());
      else
        segment[i] = static_cast<std::int64_t>(segment_pick(rng));
    }
    auto name = unique_text_column("c_name", n_cust, [](std::size_t i) { return fmt::format("Customer#{:09d}", i + 1); });
    auto address = unique_text_column("c_address", n_cust, [](std::size_t i) {
      return fmt::format("{} Main St Apt {}", (i * 7919) % 9973 + 1, i % 97 + 1);
    });
    auto phone = unique_text_column("c_phone", n_cust, [&](std::size_t i) {
      return fmt::format("{:02d}-{:03d}-{:03d}-{:04d}", nation[i] + 10, (i / 1000000) % 1000, (i / 1000) % 1000,
                         i % 10000);
    });
    constexpr std::array<std::string_view, 8> words{"carefully", "final", "deposits", "regular",
                                                    "ironic",    "pending", "requests", "quickly"};
    std::vector<std::string> comments;
    for (auto a : words)
      for (auto b : words) comments.push_back(fmt::format("{} {}", a, b));
    std::vector<std::int64_t> comment(n_cust);
    for (auto& c : comment) c = static_cast<std::int64_t>(rng.below(comments.size()));
    db.emplace_back("customer",
                    std::vector<Column>{int_column("c_custkey", std::move(key)), std::move(name), std::move(address),
                                        int_column("c_nationkey", std::move(nation)), std::move(phone),
                                        float_column("c_acctbal", std::move(bal)),
                                        text_column("c_mktsegment", kSegments, std::move(segment)),
                                        text_column("c_comment", comments, std::move(comment))});
  }
  std::vector<std::int64_t> part_price_cents(n_part);
  {
    auto rng = table_rng(spec.seed, "part");
    ZipfSampler size_pick(50, skew);
    std::vector<std::int64_t> key(n_part), size(n_part);
    std::vector<double> price(n_part);
    for (std::size_t i = 0; i < n_part; ++i) {
      key[i] = static_cast<std::int64_t>(i + 1);
      size[i] = static_cast<std::int64_t>(size_pick(rng)) + 1;
      // TPC-H retail price formula
      std::int64_t k = key[i];
      part_price_cents[i] = 90000 + ((k / 10) % 20001) + 100 * (k % 1000);
      price[i] = cents(part_price_cents[i]);
    }
    db.emplace_back("part", std::vector<Column>{int_column("p_partkey", std::move(key)),
                                                int_column("p_size", std::move(size)),
                                                float_column("p_retailprice", std::move(price))});
  }
  // Supplier j (0..3) of a part; the same mapping is used by lineitem so that
  // (l_partkey, l_suppkey) always names an existing partsupp row.
  const std::size_t supp_stride = std::max<std::size_t>(1, n_supp / 4);
  auto supplier_of = [&](std::int64_t partkey, std::size_t j) {
    return static_cast<std::int64_t>((static_cast<std::size_t>(partkey - 1) + j * supp_stride) % n_supp) + 1;
  };
  {
    auto rng = table_rng(spec.seed, "partsupp");
    ZipfSampler qty_pick(9999, skew);
    std::vector<std::int64_t> pk(n_ps), sk(n_ps), qty(n_ps);
    std::vector<double> cost(n_ps);
    for (std::size_t i = 0; i < n_ps; ++i) {
      pk[i] = static_cast<std::int64_t>((i / 4) % n_part) + 1;
      sk[i] = supplier_of(pk[i], i % 4);
      qty[i] = static_cast<std::int64_t>(qty_pick(rng)) + 1;
      cost[i] = cents(rng.between(100, 100000));
    }
    db.emplace_back("partsupp",
                    std::vector<Column>{int_column("ps_partkey", std::move(pk)), int_column("ps_suppkey", std::move(sk)),
                                        int_column("ps_availqty", std::move(qty)),
                                        float_column("ps_supplycost", std::move(cost))});
  }
  std::vector<std::int64_t> order_date(n_ord);
  {
    auto rng = table_rng(spec.seed, "orders");
    ZipfSampler cust_pick(n_cust, skew);
    constexpr std::array<std::string_view, 3> statuses{"F", "O", "P"};
    std::vector<std::int64_t> key(n_ord), cust(n_ord), status(n_ord);
    std::vector<double> total(n_ord);
    for (std::size_t i = 0; i < n_ord; ++i) {
      key[i] = static_cast<std::int64_t>(i + 1);
      cust[i] = static_cast<std::int64_t>(cust_pick(rng)) + 1;
      order_date[i] = rng.between(kStartDate, kLastOrderDate);
      total[i] = cents(rng.between(85000, 55000000));
      if (rng.unit() < rho)
        status[i] = order_date[i] < kStatusCutoff ? 0 : 1;
      else
        status[i] = static_cast<std::int64_t>(rng.below(3));
    }
    db.emplace_back("orders", std::vector<Column>{int_column("o_orderkey", std::move(key)),
                                                  int_column("o_custkey", std::move(cust)),
                                                  text_column("o_orderstatus", statuses, std::move(status)),
                                                  float_column("o_totalprice", std::move(total)),
                                                  int_column("o_orderdate", order_date, ColumnType::Date)});
  }
  {
    auto rng = table_rng(spec.seed, "lineitem");
    ZipfSampler order_pick(n_ord, skew), part_pick(n_part, skew), qty_pick(50, skew), disc_pick(11, skew);
    constexpr std::array<std::string_view, 3> flags{"R", "A", "N"};
    std::vector<std::int64_t> ok(n_li), pk(n_li), sk(n_li), qty(n_li), flag(n_li), ship(n_li);
    std::vector<double> price(n_li), disc(n_li);
    for (std::size_t i = 0; i < n_li; ++i) {
      auto o = order_pick(rng);
      ok[i] = static_cast<std::int64_t>(o) + 1;
      auto p = part_pick(rng);
      pk[i] = static_cast<std::int64_t>(p) + 1;
      sk[i] = supplier_of(pk[i], static_cast<std::size_t>(rng.below(4)));
      qty[i] = static_cast<std::int64_t>(qty_pick(rng)) + 1;
      price[i] = cents(qty[i] * part_price_cents[p]);
      disc[i] = cents(static_cast<std::int64_t>(disc_pick(rng)));
      ship[i] = order_date[o] + rng.between(1, 121);
      if (rng.unit() < rho)
        flag[i] = ship[i] < kStatusCutoff ? 0 : 2;
      else
        flag[i] = static_cast<std::int64_t>(rng.below(3));
    }
    db.emplace_back("lineitem",
                    std::vector<Column>{int_column("l_orderkey", std::move(ok)), int_column("l_partkey", std::move(pk)),
                                        int_column("l_suppkey", std::move(sk)), int_column("l_quantity", std::move(qty)),
                                        float_column("l_extendedprice", std::move(price)),
                                        float_column("l_discount", std::move(disc)),
                                        text_column("l_returnflag", flags, std::move(flag)),
                                        int_column("l_shipdate", std::move(ship), ColumnType::Date)});
  }
  return db;
}

Database generate_ssb(const GeneratorSpec& spec) {
  const auto n_supp = scaled_rows(spec.kind, "supplier", spec.scale);
  const auto n_cust = scaled_rows(spec.kind, "customer", spec.scale);
  const auto n_part = scaled_rows(spec.kind, "part", spec.scale);
  const auto n_lo = scaled_rows(spec.kind, "lineorder", spec.scale);
  const double skew = spec.skew;
  Database db;

  const std::int64_t first_day = parse_date("1992-01-01");
  const std::size_t n_days = scaled_rows(spec.kind, "ddate", spec.scale);
  std::vector<std::int64_t> datekeys(n_days);
  {
    std::vector<std::int64_t> year(n_days), yearmonth(n_days);
    for (std::size_t i = 0; i < n_days; ++i) {
      std::chrono::year_month_day ymd{std::chrono::sys_days{std::chrono::days{first_day + static_cast<std::int64_t>(i)}}};
      auto y = static_cast<int>(ymd.year());
      auto m = static_cast<unsigned>(ymd.month());
      auto d = static_cast<unsigned>(ymd.day());
      datekeys[i] = y * 10000 + m * 100 + d;
      year[i] = y;
      yearmonth[i] = y * 100 + m;
    }
    db.emplace_back("ddate", std::vector<Column>{int_column("d_datekey", datekeys), int_column("d_year", std::move(year)),
                                                 int_column("d_yearmonthnum", std::move(yearmonth))});
  }
  // city = nation * 10 + k, region = nation / 5
  ZipfSampler city_pick(250, skew);
  auto geo_table = [&](std::string name, std::string prefix, std::size_t rows) {
    auto rng = table_rng(spec.seed, name);
    std::vector<std::int64_t> key(rows), city(rows), nation(rows), region(rows);
    for (std::size_t i = 0; i < rows; ++i) {
      key[i] = static_cast<std::int64_t>(i + 1);
      city[i] = static_cast<std::int64_t>(city_pick(rng));
      nation[i] = city[i] / 10;
      region[i] = nation[i] / 5;
    }
    db.emplace_back(std::move(name),
                    std::vector<Column>{int_column(prefix + "_" + (prefix == "c" ? "custkey" : "suppkey"), std::move(key)),
                                        int_column(prefix + "_city", std::move(city)),
                                        int_column(prefix + "_nation", std::move(nation)),
                                        int_column(prefix + "_region", std::move(region))});
  };
  geo_table("customer", "c", n_cust);
  geo_table("supplier", "s", n_supp);
  std::vector<std::int64_t> part_price(n_part);
  {
    auto rng = table_rng(spec.seed, "part");
    ZipfSampler brand_pick(5 * 5 * 40, skew);
    std::vector<std::int64_t> key(n_part), mfgr(n_part), category(n_part), brand(n_part);
    for (std::size_t i = 0; i < n_part; ++i) {
      key[i] = static_cast<std::int64_t>(i + 1);
      auto b = static_cast<std::int64_t>(brand_pick(rng));
      mfgr[i] = b / 200 + 1;
      category[i] = mfgr[i] * 10 + (b / 40) % 5 + 1;
      brand[i] = category[i] * 100 + b % 40 + 1;
      part_price[i] = 90000 + ((key[i] / 10) % 20001) + 100 * (key[i] % 1000);
    }
    db.emplace_back("part", std::vector<Column>{int_column("p_partkey", std::move(key)),
                                                int_column("p_mfgr", std::move(mfgr)),
                                                int_column("p_category", std::move(category)),
                                                int_column("p_brand1", std::move(brand))});
  }
  {
    auto rng = table_rng(spec.seed, "lineorder");
    ZipfSampler cust_pick(n_cust, skew), part_pick(n_part, skew), supp_pick(n_supp, skew), date_pick(n_days, skew),
        qty_pick(50, skew), disc_pick(11, skew);
    std::vector<std::int64_t> ok(n_lo), ck(n_lo), pk(n_lo), sk(n_lo), od(n_lo), qty(n_lo), disc(n_lo), rev(n_lo),
        cost(n_lo);
    for (std::size_t i = 0; i < n_lo; ++i) {
      ok[i] = static_cast<std::int64_t>(i / 4) + 1;
      ck[i] = static_cast<std::int64_t>(cust_pick(rng)) + 1;
      auto p = part_pick(rng);
      pk[i] = static_cast<std::int64_t>(p) + 1;
      sk[i] = static_cast<std::int64_t>(supp_pick(rng)) + 1;
      od[i] = datekeys[date_pick(rng)];
      qty[i] = static_cast<std::int64_t>(qty_pick(rng)) + 1;
      // designated pair: large quantities get the top discount
      if (rng.unit() < spec.correlation)
        disc[i] = qty[i] > 25 ? 10 : 0;
      else
        disc[i] = static_cast<std::int64_t>(disc_pick(rng));
      auto ext = qty[i] * part_price[p];
      rev[i] = ext * (100 - disc[i]) / 100;
      cost[i] = part_price[p] * 6 / 10;
    }
    db.emplace_back("lineorder",
                    std::vector<Column>{int_column("lo_orderkey", std::move(ok)), int_column("lo_custkey", std::move(ck)),
                                        int_column("lo_partkey", std::move(pk)), int_column("lo_suppkey", std::move(sk)),
                                        int_column("lo_orderdate", std::move(od)),
                                        int_column("lo_quantity", std::move(qty)),
                                        int_column("lo_discount", std::move(disc)),
                                        int_column("lo_revenue", std::move(rev)),
                                        int_column("lo_supplycost", std::move(cost))});
  }
  return db;
}

}  // namespace

std::size_t scaled_rows(SchemaKind kind, std::string_view table, double scale) {
  auto lookup = [&](const auto& sizes) -> std::size_t {
    for (const auto& s : sizes) {
      if (s.table != table) continue;
      if (s.fixed) return static_cast<std::size_t>(s.rows);
      return std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(s.rows * scale + 1e-9)));
    }
    throw Error(fmt::format("unknown table '{}'", table));
  };
  return kind == SchemaKind::TpchLite ? lookup(kTpchSizes) : lookup(kSsbSizes);
}

Database generate(const GeneratorSpec& spec) {
  if (!(spec.scale > 0)) throw Error("scale must be positive");
  if (spec.skew < 0) throw Error("skew must be >= 0");
  if (spec.correlation < 0 || spec.correlation > 1) throw Error("correlation must be in [0,1]");
  return spec.kind == SchemaKind::TpchLite ? generate_tpch(spec) : generate_ssb(spec);
}

const Table& find_table(const Database& db, std::string_view name) {
  for (const auto& t : db)
    if (t.name() == name) return t;
  throw CatalogError(fmt::format("no table named {}", name));
}

}  // namespace exactsel
