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


#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "exactsel/predicate.hpp"
#include "exactsel/synopsis.hpp"

namespace exactsel {

class Catalog;
class Executor;
struct ExecStats;

enum class EstimatorKind : std::uint8_t { Exact, Uniform, EquiWidth, EquiDepth, CountMin, Sample };

std::string_view to_string(EstimatorKind kind);
/// Accepts exact, uniform, equiwidth, equidepth, cms, sample.
EstimatorKind parse_estimator_kind(std::string_view name);

struct SelectivityEstimate {
  double cardinality = 0;
  /// cardinality / row_count, 0 for an empty table.
  double factor = 0;
  bool exact = false;

  static SelectivityEstimate of_factor(double factor, std::size_t row_count);
  static SelectivityEstimate of_cardinality(double cardinality, std::size_t row_count, bool exact = false);
};

/// |R| / V(R, A). Throws InvalidStatistics when distinct is 0 for a
/// non-empty table.
SelectivityEstimate uniform_equality(std::size_t row_count, std::size_t distinct);
/// |R| / 3.
SelectivityEstimate uniform_inequality(std::size_t row_count);
/// Product of the factors; 1 for none. Throws InvalidStatistics when a factor
/// lies outside [0, 1].
double combine_and(std::span<const double> factors);
/// f1 + f2 - f1 f2.
double combine_or(double f1, double f2);

SelectivityEstimate hist_estimate_equality(const Histogram& h, double value);
/// Ops Lt, Gt, Le, Ge; Eq falls through to hist_estimate_equality.
SelectivityEstimate hist_estimate_range(const Histogram& h, CompareOp op, double value);
void cms_update(CountMinSketch& sketch, std::uint64_t key);
SelectivityEstimate cms_point(const CountMinSketch& sketch, std::uint64_t key, std::size_t row_count);
/// Rows of the sample satisfying `pred`, scaled by |R| / |R'|.
SelectivityEstimate sample_estimate(const RowSample& sample, const PredicateExpr& pred, const Table& table,
                                    const std::string& alias);

/// Estimates |sigma_pred(table)|. Every column in `pred` must be qualified by
/// `table`. The exact kind runs a COUNT over a Compound sub-plan through
/// `executor`, adding its work to `stats` when given; synopsis kinds build any
/// missing synopsis with `params` and combine per-leaf factors assuming
/// independence.
SelectivityEstimate estimate(const PredicateExpr& pred, const std::string& table, EstimatorKind kind,
                             Catalog& catalog, Executor& executor, const SynopsisParams& params = {},
                             ExecStats* stats = nullptr);

}  // namespace exactsel
