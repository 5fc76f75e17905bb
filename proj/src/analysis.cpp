// Copyright 2026 The kmr Authors
// SPDX-License-Identifier: Apache-2.0

#include "kmr/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "kmr/errors.hpp"

namespace kmr {

ComputeEstimate estimate_compute(const std::string& model, double params, double tokens) {
  if (!(params > 0.0) || !(tokens > 0.0))
    throw DomainError("compute estimate needs positive parameter and token counts (" + model +
                      ")");
  ComputeEstimate est;
  est.model = model;
  est.params = params;
  est.tokens = tokens;
  est.flops = 6.0 * params * tokens;
  est.exaflops = est.flops / 1e18;
  return est;
}

std::vector<ModelMeta> read_model_metadata(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open model metadata: " + path);
  std::vector<ModelMeta> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    // model,params,tokens,citation; the citation is the remainder and may
    // itself contain commas.
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
    const auto c3 = c2 == std::string::npos ? std::string::npos : line.find(',', c2 + 1);
    if (c3 == std::string::npos) throw ParseError(path + ": expected 4 fields", line_no);
    ModelMeta meta;
    meta.model = line.substr(0, c1);
    try {
      meta.params = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
      meta.tokens = std::stod(line.substr(c2 + 1, c3 - c2 - 1));
    } catch (const std::exception&) {
      throw ParseError(path + ": bad numeric field", line_no);
    }
    meta.citation = line.substr(c3 + 1);
    if (meta.model.empty() || meta.citation.empty())
      throw ParseError(path + ": empty model or citation", line_no);
    for (const auto& seen : out) {
      if (seen.model == meta.model)
        throw ParseError(path + ": duplicate model '" + meta.model + "'", line_no);
    }
    out.push_back(std::move(meta));
  }
  if (out.empty()) throw ParseError(path + ": no entries");
  return out;
}

double OlsFit::rmse() const {
  if (residuals.empty()) return 0.0;
  double ss = 0.0;
  for (const double r : residuals) ss += r * r;
  return std::sqrt(ss / static_cast<double>(residuals.size()));
}

OlsFit ols_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw DomainError("least squares needs at least two (x, y) pairs");
  const double n = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double denom = n * sxx - sx * sx;
  const double scale = sxx / n;
  if (std::abs(denom) <= 1e-12 * std::max(1.0, scale * n))
    throw SingularFitError("predictor is constant; slope is undetermined");

  OlsFit fit;
  fit.n = static_cast<int>(xs.size());
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;

  const double mean_y = sy / n;
  double ss_res = 0.0, ss_tot = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - fit.predict(xs[i]);
    fit.residuals.push_back(r);
    ss_res += r * r;
    ss_tot += (ys[i] - mean_y) * (ys[i] - mean_y);
  }
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

std::vector<std::string> rank_by_final_average(const StepAccuracyTable& date,
                                               const StepAccuracyTable& zodiac) {
  std::vector<std::pair<double, std::string>> ranked;
  for (const auto& model : date.models) {
    if (!zodiac.rates.count(model)) continue;
    ranked.emplace_back((date.final_rate(model) + zodiac.final_rate(model)) / 2.0, model);
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<std::string> out;
  for (const auto& [avg, model] : ranked) out.push_back(model);
  return out;
}

namespace {

SubsetRegression regress_subset(const StepAccuracyTable& table,
                                const std::vector<std::string>& fit_models,
                                const std::vector<std::string>& holdout_models,
                                const std::map<std::string, double>& log_flops) {
  if (fit_models.size() < 3)
    throw DomainError("need at least 3 fit models per step, have " +
                      std::to_string(fit_models.size()));
  SubsetRegression out;
  out.subset = table.subset;
  for (int k = 0; k < table.columns; ++k) {
    StepFit sf;
    sf.column = k;
    sf.is_final = k + 1 == table.columns;

    std::vector<double> xs, ys;
    for (const auto& model : fit_models) {
      xs.push_back(log_flops.at(model));
      ys.push_back(table.rates.at(model)[static_cast<size_t>(k)]);
    }
    sf.fit = ols_fit(xs, ys);

    double abs_sum = 0.0;
    for (const auto& model : holdout_models) {
      const double r =
          table.rates.at(model)[static_cast<size_t>(k)] - sf.fit.predict(log_flops.at(model));
      sf.holdout_models.push_back(model);
      sf.holdout_residuals.push_back(r);
      abs_sum += std::abs(r);
    }
    sf.holdout_mean_abs =
        holdout_models.empty() ? 0.0 : abs_sum / static_cast<double>(holdout_models.size());
    const double rmse = sf.fit.rmse();
    sf.holdout_z = rmse > 0.0 ? sf.holdout_mean_abs / rmse : 0.0;
    out.steps.push_back(std::move(sf));
  }

  const double final_res = out.steps.back().holdout_mean_abs;
  out.final_dominant = true;
  for (size_t k = 0; k + 1 < out.steps.size(); ++k) {
    if (final_res <= out.steps[k].holdout_mean_abs) out.final_dominant = false;
  }
  return out;
}

}  // namespace

EmergenceAnalysis analyze_emergence(const StepAccuracyTable& date,
                                    const StepAccuracyTable& zodiac,
                                    const std::vector<ModelMeta>& metadata) {
  EmergenceAnalysis out;
  const auto ranked = rank_by_final_average(date, zodiac);
  out.top5.assign(ranked.begin(), ranked.begin() + std::min<size_t>(5, ranked.size()));

  std::map<std::string, double> log_flops;
  for (const auto& meta : metadata) {
    if (!date.rates.count(meta.model) || !zodiac.rates.count(meta.model)) continue;
    const ComputeEstimate est = estimate_compute(meta.model, meta.params, meta.tokens);
    log_flops[meta.model] = std::log10(est.flops);
    out.computes.push_back(est);
  }

  const auto in_top5 = [&](const std::string& model) {
    return std::find(out.top5.begin(), out.top5.end(), model) != out.top5.end();
  };
  for (const auto& model : date.models) {
    if (!log_flops.count(model)) continue;
    (in_top5(model) ? out.holdout_models : out.fit_models).push_back(model);
  }

  out.date = regress_subset(date, out.fit_models, out.holdout_models, log_flops);
  out.zodiac = regress_subset(zodiac, out.fit_models, out.holdout_models, log_flops);
  return out;
}

void write_regression_csv(const std::string& path, const SubsetRegression& regression,
                          const std::string& header_extra) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write regression table: " + path);
  out << "# kmr regression v1 subset=" << to_string(regression.subset);
  if (!header_extra.empty()) out << " " << header_extra;
  out << "\nstep,slope,intercept,r2,fit_rmse,holdout_mean_abs_residual,holdout_z\n";
  for (const auto& sf : regression.steps) {
    out << (sf.is_final ? "final" : "step" + std::to_string(sf.column)) << "," << sf.fit.slope
        << "," << sf.fit.intercept << "," << sf.fit.r2 << "," << sf.fit.rmse() << ","
        << sf.holdout_mean_abs << "," << sf.holdout_z << "\n";
  }
}

void write_emergence_csv(const std::string& path, const EmergenceAnalysis& analysis,
                         const std::string& header_extra) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write emergence summary: " + path);
  out << "# kmr emergence v1";
  if (!header_extra.empty()) out << " " << header_extra;
  out << "\nsubset,final_mean_abs_residual,max_intermediate_mean_abs_residual,final_dominant\n";
  for (const SubsetRegression* reg : {&analysis.date, &analysis.zodiac}) {
    double max_mid = 0.0;
    for (size_t k = 0; k + 1 < reg->steps.size(); ++k) {
      max_mid = std::max(max_mid, reg->steps[k].holdout_mean_abs);
    }
    out << to_string(reg->subset) << "," << reg->steps.back().holdout_mean_abs << "," << max_mid
        << "," << (reg->final_dominant ? "true" : "false") << "\n";
  }
}

void write_plot_data(const std::string& dir, const StepAccuracyTable& table,
                     const EmergenceAnalysis& analysis, const std::string& header_extra) {
  std::map<std::string, double> log_flops;
  for (const auto& est : analysis.computes) log_flops[est.model] = std::log10(est.flops);
  const SubsetRegression& reg =
      table.subset == Subset::date ? analysis.date : analysis.zodiac;

  for (const auto& sf : reg.steps) {
    const std::string name =
        sf.is_final ? "final" : "step" + std::to_string(sf.column);
    const std::string path =
        dir + "/plot_" + to_string(table.subset) + "_" + name + ".csv";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write plot data: " + path);
    out << "# kmr plot-data v1 subset=" << to_string(table.subset) << " step=" << name;
    if (!header_extra.empty()) out << " " << header_extra;
    out << "\nmodel,log10_flops,pass_rate,fit,split\n";
    auto emit = [&](const std::vector<std::string>& models, const char* split) {
      for (const auto& model : models) {
        const double x = log_flops.at(model);
        out << model << "," << x << "," << table.rates.at(model)[static_cast<size_t>(sf.column)]
            << "," << sf.fit.predict(x) << "," << split << "\n";
      }
    };
    emit(analysis.fit_models, "fit");
    emit(analysis.holdout_models, "holdout");
  }
}

}  // namespace kmr
