// Copyright 2026 The kmr Authors
// SPDX-License-Identifier: Apache-2.0
//
// Verdict aggregation. A verdict failing at step k passes every step below
// k and fails k and everything after, so per-step pass rates are
// non-increasing by construction.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "kmr/question.hpp"
#include "kmr/run_store.hpp"

namespace kmr {

struct StepAccuracyTable {
  Subset subset = Subset::date;
  int columns = 0;                  // trace positions, final included
  std::vector<std::string> models;  // row order
  std::map<std::string, std::vector<double>> rates;  // percentages, size == columns

  double final_rate(const std::string& model) const { return rates.at(model).back(); }

  static StepAccuracyTable from_csv(const std::string& path);
  void to_csv(const std::string& path, const std::string& header_extra = "") const;
};

// rates[k] >= rates[k+1] for every model row.
bool cumulative_monotone(const StepAccuracyTable& table);

struct ScoredRun {
  StepAccuracyTable date;
  StepAccuracyTable zodiac;
  int dropped_records = 0;  // failed/unparseable records, scored as step-0 failures
};

// Aggregates a run store against its release. Records without a verdict
// count as failures at step 0 (no credit anywhere).
ScoredRun score_run(const std::vector<RunRecord>& records, const BenchmarkRelease& release);

struct FinalScore {
  std::string model;
  double date = 0.0;
  double zodiac = 0.0;
  double average = 0.0;
};

// Per-model final scores plus the cross-subset mean, in table row order.
std::vector<FinalScore> final_scores(const StepAccuracyTable& date,
                                     const StepAccuracyTable& zodiac);

void write_final_scores_csv(const std::string& path, const std::vector<FinalScore>& scores,
                            const std::string& header_extra = "");

}  // namespace kmr
