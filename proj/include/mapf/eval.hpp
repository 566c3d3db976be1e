/*
 * Copyright (C) 2026 mapf-replan contributors
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
 *
*/

#ifndef MAPF__EVAL_HPP
#define MAPF__EVAL_HPP

#include <optional>
#include <string>
#include <vector>

#include "mapf/dataset.hpp"
#include "mapf/model.hpp"

namespace mapf {

/// Replan iff the predicted saving reaches the threshold (inclusive).
bool decide(double pred_s, double tau_s);

enum class OutcomeClass { tp, fp, tn, fn };

/// Threshold decisions over a record set with classification and savings
/// aggregates. Ratios with a zero denominator stay unset rather than being
/// forced to zero. All quantities in seconds where applicable.
struct DecisionReport
{
  double tau = 1.0;

  std::vector<double> pred;
  std::vector<double> truth;  // true y per record
  std::vector<bool> decision;
  std::vector<OutcomeClass> cls;

  int tp = 0, fp = 0, tn = 0, fn = 0;
  std::optional<double> sensitivity;
  std::optional<double> specificity;
  std::optional<double> precision;
  std::optional<double> f1;

  int replans = 0;  // tp + fp
  double realized = 0.0;
  double potential = 0.0;
  std::optional<double> recovery;
  std::optional<double> mean_saving_per_replan;
  std::optional<double> mean_saving_per_positive;

  /// Same accounting with the replan-overhead-adjusted saving
  /// y' = soc_ei - soc_eirp.
  double realized_overhead = 0.0;
  std::optional<double> recovery_overhead;

  /// Expected savings of a policy that replans in as many uniformly random
  /// records: replans/records · sum of all y.
  double random_trigger_expected = 0.0;
  std::optional<double> random_trigger_recovery;

  /// Mean of y/(soc_ei - soc_e) over decided replans where the obstacle
  /// increased the cost at all.
  std::optional<double> mean_relative_saving;
  int no_increase_records = 0;

  double mae = 0.0;
};

/// Classification aggregates only; truth class is y >= tau.
DecisionReport confusion_metrics(
  const std::vector<double>& preds, const std::vector<double>& truths, double tau);

/// Full report: predicts every record with the model, classifies against
/// tau, and accounts realized/potential savings plus the baselines.
DecisionReport savings_report(
  const std::vector<LabeledRecord>& records, const MlpModel& model, double tau,
  int jobs = 1);

std::string report_text(const DecisionReport& report);

struct HistogramBin
{
  double lo = 0.0;
  double hi = 0.0;
  int count = 0;
};

/// Equal-width bins spanning [min, max] of the values; empty input gives no
/// bins, constant input one bin.
std::vector<HistogramBin> histogram(const std::vector<double>& values, int bins);

/// Writes report.txt and the per-figure CSVs into `dir` (created if
/// missing): scenario costs, cost-increase and savings histograms,
/// prediction scatter, realized absolute/relative savings, and, when 42
/// importance values are passed, the feature importances.
void write_report_files(
  const std::string& dir, const DecisionReport& report,
  const std::vector<LabeledRecord>& records, const std::vector<double>& importance);

}  // namespace mapf

#endif  // MAPF__EVAL_HPP
