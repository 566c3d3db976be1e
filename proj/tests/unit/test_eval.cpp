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

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "mapf/errors.hpp"
#include "mapf/eval.hpp"
#include "test_util.hpp"

using namespace mapf;

namespace {

// Reads prediction = features[5] so report numbers are hand-checkable.
MlpModel passthrough_model()
{
  MlpModel m;
  m.layers = {kFeatureCount, 1};
  Matrix w(1, kFeatureCount);
  w.at(0, 5) = 1.0;
  m.weights.push_back(w);
  m.biases.push_back({0.0});
  m.x_scaler.center.assign(kFeatureCount, 0.0);
  m.x_scaler.scale.assign(kFeatureCount, 1.0);
  return m;
}

LabeledRecord outcome_record(double pred, double y, double soc_e, double soc_ei,
                             double soc_eirp)
{
  LabeledRecord rec;
  rec.features[5] = pred;
  rec.y = y;
  rec.soc_e = soc_e;
  rec.soc_ei = soc_ei;
  rec.soc_eir = soc_ei - y;
  rec.soc_eirp = soc_eirp;
  return rec;
}

std::vector<std::string> lines_of(const std::string& text)
{
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("the decision threshold is inclusive")
{
  CHECK(decide(1.0, 1.0));
  CHECK(decide(1.5, 1.0));
  CHECK_FALSE(decide(0.9999, 1.0));
  CHECK(decide(-0.5, -1.0));
}

TEST_CASE("confusion counts and rates for a known mix")
{
  const std::vector<double> preds{1.5, 1.0, 1.2, 0.2, 0.0, 0.5, -1.0, 0.9, 0.1, 0.4};
  const std::vector<double> truths{2.0, 1.0, 0.3, 3.0, 0.0, 0.5, 0.2, 0.99, -0.5, 0.6};
  const DecisionReport r = confusion_metrics(preds, truths, 1.0);

  CHECK(r.tp == 2);
  CHECK(r.fp == 1);
  CHECK(r.tn == 6);
  CHECK(r.fn == 1);
  CHECK(r.replans == 3);
  REQUIRE(r.sensitivity);
  CHECK(*r.sensitivity == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  REQUIRE(r.specificity);
  CHECK(*r.specificity == doctest::Approx(6.0 / 7.0).epsilon(1e-12));
  REQUIRE(r.precision);
  CHECK(*r.precision == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  REQUIRE(r.f1);
  CHECK(*r.f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(r.mae == doctest::Approx(0.629).epsilon(1e-12));

  REQUIRE(r.cls.size() == 10);
  CHECK(r.cls[0] == OutcomeClass::tp);
  CHECK(r.cls[2] == OutcomeClass::fp);
  CHECK(r.cls[3] == OutcomeClass::fn);
  CHECK(r.cls[4] == OutcomeClass::tn);

  CHECK_THROWS_AS(confusion_metrics({1.0}, {1.0, 2.0}, 1.0), InvalidInput);
}

TEST_CASE("degenerate record sets leave ratios unset")
{
  const DecisionReport none = confusion_metrics({}, {}, 1.0);
  CHECK_FALSE(none.sensitivity);
  CHECK_FALSE(none.specificity);
  CHECK_FALSE(none.precision);
  CHECK_FALSE(none.f1);
  CHECK(none.mae == 0.0);

  const DecisionReport no_pos = confusion_metrics({0.0, 0.2}, {0.1, 0.3}, 1.0);
  CHECK_FALSE(no_pos.sensitivity);
  CHECK_FALSE(no_pos.precision);
  REQUIRE(no_pos.specificity);
  CHECK(*no_pos.specificity == 1.0);

  const DecisionReport all_pos = confusion_metrics({2.0, 3.0}, {2.0, 3.0}, 1.0);
  CHECK_FALSE(all_pos.specificity);
  REQUIRE(all_pos.sensitivity);
  CHECK(*all_pos.sensitivity == 1.0);
}

TEST_CASE("the savings report accounts every baseline by hand")
{
  const MlpModel model = passthrough_model();
  const std::vector<LabeledRecord> records{
    outcome_record(2.0, 1.5, 10.0, 13.0, 11.6),  // tp, relative 0.5
    outcome_record(1.0, 0.5, 10.0, 10.5, 10.1),  // fp, relative 1.0
    outcome_record(0.0, 2.5, 20.0, 23.0, 20.6),  // fn
    outcome_record(0.5, 0.0, 15.0, 15.0, 15.05),  // tn, no cost increase
    outcome_record(1.2, 0.0, 9.0, 9.0, 9.2),  // fp, decided, no cost increase
  };
  const DecisionReport r = savings_report(records, model, 1.0);

  CHECK(r.tp == 1);
  CHECK(r.fp == 2);
  CHECK(r.tn == 1);
  CHECK(r.fn == 1);
  CHECK(r.replans == 3);
  CHECK(r.realized == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r.potential == doctest::Approx(4.0).epsilon(1e-12));
  REQUIRE(r.recovery);
  CHECK(*r.recovery == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.realized_overhead == doctest::Approx(1.6).epsilon(1e-9));
  REQUIRE(r.recovery_overhead);
  CHECK(*r.recovery_overhead == doctest::Approx(0.4).epsilon(1e-9));
  CHECK(r.random_trigger_expected == doctest::Approx(2.7).epsilon(1e-12));
  REQUIRE(r.random_trigger_recovery);
  CHECK(*r.random_trigger_recovery == doctest::Approx(0.675).epsilon(1e-12));
  REQUIRE(r.mean_saving_per_replan);
  CHECK(*r.mean_saving_per_replan == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  REQUIRE(r.mean_saving_per_positive);
  CHECK(*r.mean_saving_per_positive == doctest::Approx(2.0).epsilon(1e-12));
  REQUIRE(r.mean_relative_saving);
  CHECK(*r.mean_relative_saving == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(r.no_increase_records == 2);
  CHECK(r.mae == doctest::Approx(1.04).epsilon(1e-12));
}

TEST_CASE("report text keeps a fixed key order and spells out unset ratios")
{
  const MlpModel model = passthrough_model();
  const std::vector<LabeledRecord> records{
    outcome_record(2.0, 1.5, 10.0, 13.0, 11.6),
    outcome_record(0.0, 0.0, 15.0, 15.0, 15.0),
  };
  const std::string text = report_text(savings_report(records, model, 1.0));
  const std::vector<std::string> lines = lines_of(text);
  const std::vector<std::string> keys{
    "records", "tau_s", "positives", "negatives", "tp", "fp", "tn", "fn",
    "sensitivity", "specificity", "precision", "f1", "mae_s", "replans",
    "realized_savings_s", "potential_savings_s", "recovery_rate",
    "mean_saving_per_replan_s", "mean_saving_per_positive_s",
    "realized_savings_overhead_s", "recovery_rate_overhead",
    "random_trigger_expected_savings_s", "random_trigger_recovery",
    "mean_relative_saving", "no_increase_records"};
  REQUIRE(lines.size() == keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i)
    CHECK(lines[i].rfind(keys[i] + ": ", 0) == 0);
  CHECK(lines[0] == "records: 2");
  CHECK(lines[4] == "tp: 1");

  const std::string empty_text = report_text(confusion_metrics({}, {}, 1.0));
  CHECK(lines_of(empty_text)[8] == "sensitivity: undefined");
  CHECK(lines_of(empty_text)[16] == "recovery_rate: undefined");
}

TEST_CASE("histograms span the value range with equal-width bins")
{
  const std::vector<HistogramBin> h = histogram({0, 1, 2, 3, 4}, 2);
  REQUIRE(h.size() == 2);
  CHECK(h[0].lo == 0.0);
  CHECK(h[0].hi == 2.0);
  CHECK(h[0].count == 2);
  CHECK(h[1].lo == 2.0);
  CHECK(h[1].hi == 4.0);  // closed on the maximum
  CHECK(h[1].count == 3);

  CHECK(histogram({}, 5).empty());
  const std::vector<HistogramBin> flat = histogram({7, 7, 7}, 4);
  REQUIRE(flat.size() == 1);
  CHECK(flat[0].lo == 7.0);
  CHECK(flat[0].count == 3);
  CHECK_THROWS_AS(histogram({1.0}, 0), InvalidInput);
}

TEST_CASE("report files land in the output directory")
{
  const MlpModel model = passthrough_model();
  std::vector<LabeledRecord> records;
  for (int i = 0; i < 6; ++i)
    records.push_back(
      outcome_record(0.4 * i, 0.3 * i, 10.0, 10.0 + i, 10.0 + 0.7 * i));
  const DecisionReport report = savings_report(records, model, 1.0);

  mapf::test::TempDir dir;
  const std::string out = dir.file("report");
  write_report_files(out, report, records, {});

  for (const char* name :
       {"report.txt", "fig_soc_scenarios.csv", "fig_soc_increase_hist.csv",
        "fig_savings_hist.csv", "fig_realized_abs.csv", "fig_realized_rel.csv",
        "fig_pred_vs_true.csv", "fig_perm_importance.csv"}) {
    INFO("file ", name);
    CHECK(std::filesystem::exists(out + "/" + name));
  }
  CHECK(lines_of(mapf::test::read_file(out + "/fig_soc_scenarios.csv")).size() == 7);
  CHECK(lines_of(mapf::test::read_file(out + "/fig_pred_vs_true.csv")).size() == 7);
  CHECK(lines_of(mapf::test::read_file(out + "/fig_soc_increase_hist.csv"))[0] ==
        "bin_lo,bin_hi,count");
  // no importance values were passed, so the figure is just its header
  CHECK(mapf::test::read_file(out + "/fig_perm_importance.csv") ==
        "feature,mae_increase_s\n");

  std::vector<double> importance(kFeatureCount, 0.25);
  write_report_files(out, report, records, importance);
  CHECK(lines_of(mapf::test::read_file(out + "/fig_perm_importance.csv")).size() ==
        kFeatureCount + 1);

  std::vector<LabeledRecord> fewer(records.begin(), records.end() - 1);
  CHECK_THROWS_AS(write_report_files(out, report, fewer, {}), InvalidInput);
  CHECK_THROWS_AS(write_report_files(out, report, records, {1.0, 2.0}), InvalidInput);
}
