// Copyright 2026 The kmr Authors
// SPDX-License-Identifier: Apache-2.0
//
// Training-compute estimation and the per-step emergence regression:
// ordinary least squares of pass rate against log10 training FLOPs, fit on
// the models outside the top five performers, with held-out residuals for
// the top performers that have compute metadata.

#pragma once

#include <string>
#include <vector>

#include "kmr/scoring.hpp"

namespace kmr {

struct ComputeEstimate {
  std::string model;
  double params = 0.0;
  double tokens = 0.0;
  double flops = 0.0;     // 6 * params * tokens
  double exaflops = 0.0;  // flops / 1e18
};

// Throws DomainError unless params > 0 and tokens > 0.
ComputeEstimate estimate_compute(const std::string& model, double params, double tokens);

struct ModelMeta {
  std::string model;
  double params = 0.0;
  double tokens = 0.0;
  std::string citation;
};

std::vector<ModelMeta> read_model_metadata(const std::string& path);

struct OlsFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int n = 0;
  std::vector<double> residuals;  // fit-set residuals, input order
  double predict(double x) const { return slope * x + intercept; }
  double rmse() const;
};

// Least squares y = slope*x + intercept. Throws SingularFitError when the
// predictor is constant.
OlsFit ols_fit(const std::vector<double>& xs, const std::vector<double>& ys);

struct StepFit {
  int column = 0;  // table column; the last one is the final step
  bool is_final = false;
  OlsFit fit;
  std::vector<std::string> holdout_models;
  std::vector<double> holdout_residuals;
  double holdout_mean_abs = 0.0;
  double holdout_z = 0.0;  // mean abs residual over fit RMSE
};

struct SubsetRegression {
  Subset subset = Subset::date;
  std::vector<StepFit> steps;
  bool final_dominant = false;  // final-step mean abs residual strictly above all others
};

struct EmergenceAnalysis {
  std::vector<std::string> top5;            // by final average over both subsets
  std::vector<std::string> fit_models;      // metadata-eligible, not in top5
  std::vector<std::string> holdout_models;  // top5 with metadata
  std::vector<ComputeEstimate> computes;    // every eligible model
  SubsetRegression date;
  SubsetRegression zodiac;
};

// Models present in both tables ranked by mean of subset finals (ties by
// name for determinism).
std::vector<std::string> rank_by_final_average(const StepAccuracyTable& date,
                                               const StepAccuracyTable& zodiac);

EmergenceAnalysis analyze_emergence(const StepAccuracyTable& date,
                                    const StepAccuracyTable& zodiac,
                                    const std::vector<ModelMeta>& metadata);

void write_regression_csv(const std::string& path, const SubsetRegression& regression,
                          const std::string& header_extra = "");
void write_emergence_csv(const std::string& path, const EmergenceAnalysis& analysis,
                         const std::string& header_extra = "");
// One plot-ready file per step: model, log10_flops, pass_rate, fit, split.
void write_plot_data(const std::string& dir, const StepAccuracyTable& table,
                     const EmergenceAnalysis& analysis, const std::string& header_extra = "");

}  // namespace kmr
