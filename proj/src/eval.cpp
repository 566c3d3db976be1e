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

#include "mapf/eval.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "mapf/errors.hpp"

namespace mapf {

bool decide(double pred_s, double tau_s)
{
  return pred_s >= tau_s;
}

DecisionReport confusion_metrics(
  const std::vector<double>& preds, const std::vector<double>& truths, double tau)
{
  if (preds.size() != truths.size())
    throw InvalidInput("prediction and truth counts differ");

  DecisionReport report;
  report.tau = tau;
  report.pred = preds;
  report.truth = truths;
  double abs_err = 0.0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const bool d = decide(preds[i], tau);
    const bool p = truths[i] >= tau;
    report.decision.push_back(d);
    if (d && p) {
      ++report.tp;
      report.cls.push_back(OutcomeClass::tp);
    } else if (d) {
      ++report.fp;
      report.cls.push_back(OutcomeClass::fp);
    } else if (p) {
      ++report.fn;
      report.cls.push_back(OutcomeClass::fn);
    } else {
      ++report.tn;
      report.cls.push_back(OutcomeClass::tn);
    }
    abs_err += std::fabs(preds[i] - truths[i]);
  }
  report.replans = report.tp + report.fp;
  if (!preds.empty())
    report.mae = abs_err / static_cast<double>(preds.size());

  if (report.tp + report.fn > 0)
    report.sensitivity = static_cast<double>(report.tp) / (report.tp + report.fn);
  if (report.tn + report.fp > 0)
    report.specificity = static_cast<double>(report.tn) / (report.tn + report.fp);
  if (report.tp + report.fp > 0)
    report.precision = static_cast<double>(report.tp) / (report.tp + report.fp);
  if (report.precision && report.sensitivity &&
      *report.precision + *report.sensitivity > 0.0)
    report.f1 = 2.0 * *report.precision * *report.sensitivity /
      (*report.precision + *report.sensitivity);
  return report;
}

DecisionReport savings_report(
  const std::vector<LabeledRecord>& records, const MlpModel& model, double tau,
  int jobs)
{
  std::vector<FeatureVector> xs;
  std::vector<double> truths;
  xs.reserve(records.size());
  for (const LabeledRecord& rec : records) {
    xs.push_back(rec.features);
    truths.push_back(rec.y);
  }
  const std::vector<double> preds =
    records.empty() ? std::vector<double>{} : model.predict(xs, jobs);

  DecisionReport report = confusion_metrics(preds, truths, tau);

  double total_y = 0.0;
  double relative_sum = 0.0;
  int relative_count = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const LabeledRecord& rec = records[i];
    total_y += rec.y;
    if (rec.y >= tau)
      report.potential += rec.y;
    if (rec.soc_ei == rec.soc_e)
      ++report.no_increase_records;
    if (report.decision[i]) {
      report.realized += rec.y;
      report.realized_overhead += rec.soc_ei - rec.soc_eirp;
      if (rec.soc_ei > rec.soc_e) {
        relative_sum += rec.y / (rec.soc_ei - rec.soc_e);
        ++relative_count;
      }
    }
  }
  if (report.replans > 0)
    report.mean_saving_per_replan = report.realized / report.replans;
  const int positives = report.tp + report.fn;
  if (positives > 0)
    report.mean_saving_per_positive = report.potential / positives;
  if (!records.empty())
    report.random_trigger_expected =
      static_cast<double>(report.replans) / static_cast<double>(records.size()) *
      total_y;
  if (report.potential > 0.0) {
    report.recovery = report.realized / report.potential;
    report.recovery_overhead = report.realized_overhead / report.potential;
    report.random_trigger_recovery = report.random_trigger_expected / report.potential;
  }
  if (relative_count > 0)
    report.mean_relative_saving = relative_sum / relative_count;
  return report;
}

namespace {

std::string opt_text(const std::optional<double>& v)
{
  return v ? format_double(*v) : "undefined";
}

}  // namespace

std::string report_text(const DecisionReport& report)
{
  std::string out;
  auto line = [&out](const std::string& key, const std::string& value) {
    out += key;
    out += ": ";
    out += value;
    out += '\n';
  };
  line("records", std::to_string(report.pred.size()));
  line("tau_s", format_double(report.tau));
  line("positives", std::to_string(report.tp + report.fn));
  line("negatives", std::to_string(report.tn + report.fp));
  line("tp", std::to_string(report.tp));
  line("fp", std::to_string(report.fp));
  line("tn", std::to_string(report.tn));
  line("fn", std::to_string(report.fn));
  line("sensitivity", opt_text(report.sensitivity));
  line("specificity", opt_text(report.specificity));
  line("precision", opt_text(report.precision));
  line("f1", opt_text(report.f1));
  line("mae_s", format_double(report.mae));
  line("replans", std::to_string(report.replans));
  line("realized_savings_s", format_double(report.realized));
  line("potential_savings_s", format_double(report.potential));
  line("recovery_rate", opt_text(report.recovery));
  line("mean_saving_per_replan_s", opt_text(report.mean_saving_per_replan));
  line("mean_saving_per_positive_s", opt_text(report.mean_saving_per_positive));
  line("realized_savings_overhead_s", format_double(report.realized_overhead));
  line("recovery_rate_overhead", opt_text(report.recovery_overhead));
  line("random_trigger_expected_savings_s",
       format_double(report.random_trigger_expected));
  line("random_trigger_recovery", opt_text(report.random_trigger_recovery));
  line("mean_relative_saving", opt_text(report.mean_relative_saving));
  line("no_increase_records", std::to_string(report.no_increase_records));
  return out;
}

std::vector<HistogramBin> histogram(const std::vector<double>& values, int bins)
{
  if (bins < 1)
    throw InvalidInput("histogram needs at least one bin");
  if (values.empty())
    return {};
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (lo == hi)
    return {{lo, hi, static_cast<int>(values.size())}};
  std::vector<HistogramBin> out(static_cast<std::size_t>(bins));
  const double width = (hi - lo) / bins;
  for (int b = 0; b < bins; ++b) {
    out[static_cast<std::size_t>(b)].lo = lo + b * width;
    out[static_cast<std::size_t>(b)].hi = b + 1 == bins ? hi : lo + (b + 1) * width;
  }
  for (double v : values) {
    int b = static_cast<int>((v - lo) / width);
    b = std::clamp(b, 0, bins - 1);
    ++out[static_cast<std::size_t>(b)].count;
  }
  return out;
}

namespace {

std::string histogram_csv(const std::vector<double>& values, int bins)
{
  std::string text = "bin_lo,bin_hi,count\n";
  for (const HistogramBin& bin : histogram(values, bins)) {
    text += format_double(bin.lo);
    text += ',';
    text += format_double(bin.hi);
    text += ',';
    text += std::to_string(bin.count);
    text += '\n';
  }
  return text;
}

}  // namespace

void write_report_files(
  const std::string& dir, const DecisionReport& report,
  const std::vector<LabeledRecord>& records, const std::vector<double>& importance)
{
  if (report.pred.size() != records.size())
    throw InvalidInput("report does not match the record set");
  if (!importance.empty() && importance.size() != static_cast<std::size_t>(kFeatureCount))
    throw InvalidInput("importance vector has the wrong length");
  std::filesystem::create_directories(dir);
  const std::string base = dir + "/";

  write_text_atomic(base + "report.txt", report_text(report));

  std::string scenarios = "index,map,agents,replan_t,soc_e,soc_ei,soc_eir,soc_eirp\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const LabeledRecord& rec = records[i];
    scenarios += std::to_string(i);
    scenarios += ',';
    scenarios += rec.map_name;
    scenarios += ',';
    scenarios += std::to_string(rec.agents);
    scenarios += ',';
    scenarios += format_double(rec.replan_t);
    scenarios += ',';
    scenarios += format_double(rec.soc_e);
    scenarios += ',';
    scenarios += format_double(rec.soc_ei);
    scenarios += ',';
    scenarios += format_double(rec.soc_eir);
    scenarios += ',';
    scenarios += format_double(rec.soc_eirp);
    scenarios += '\n';
  }
  write_text_atomic(base + "fig_soc_scenarios.csv", scenarios);

  constexpr int kBins = 20;
  std::vector<double> increase, all_y, decided_y, decided_rel;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const LabeledRecord& rec = records[i];
    increase.push_back(rec.soc_ei - rec.soc_e);
    all_y.push_back(rec.y);
    if (report.decision[i]) {
      decided_y.push_back(rec.y);
      if (rec.soc_ei > rec.soc_e)
        decided_rel.push_back(rec.y / (rec.soc_ei - rec.soc_e));
    }
  }
  write_text_atomic(base + "fig_soc_increase_hist.csv", histogram_csv(increase, kBins));
  write_text_atomic(base + "fig_savings_hist.csv", histogram_csv(all_y, kBins));
  write_text_atomic(base + "fig_realized_abs.csv", histogram_csv(decided_y, kBins));
  write_text_atomic(base + "fig_realized_rel.csv", histogram_csv(decided_rel, kBins));

  std::string scatter = "pred,y\n";
  for (std::size_t i = 0; i < report.pred.size(); ++i) {
    scatter += format_double(report.pred[i]);
    scatter += ',';
    scatter += format_double(report.truth[i]);
    scatter += '\n';
  }
  write_text_atomic(base + "fig_pred_vs_true.csv", scatter);

  std::string imp = "feature,mae_increase_s\n";
  for (std::size_t f = 0; f < importance.size(); ++f) {
    imp += feature_names()[f];
    imp += ',';
    imp += format_double(importance[f]);
    imp += '\n';
  }
  write_text_atomic(base + "fig_perm_importance.csv", imp);
}

}  // namespace mapf
