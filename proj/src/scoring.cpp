// Copyright 2026 The kmr Authors
// SPDX-License-Identifier: Apache-2.0

#include "kmr/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "kmr/errors.hpp"

namespace kmr {

namespace {

std::string format_rate(double v) {
  const double rounded = std::round(v * 100.0) / 100.0;
  if (rounded == static_cast<int64_t>(rounded)) return std::to_string(static_cast<int64_t>(rounded));
  std::ostringstream out;
  out << rounded;
  return out.str();
}

}  // namespace

StepAccuracyTable StepAccuracyTable::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open step table: " + path);

  StepAccuracyTable table;
  std::string line;
  int line_no = 0;
  bool saw_columns = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto at = line.find("subset=");
      if (at != std::string::npos) {
        std::string label = line.substr(at + 7);
        label = label.substr(0, label.find_first_of(" \t\r"));
        table.subset = subset_from_string(label);
      }
      continue;
    }
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (!fields.empty() && !fields.back().empty() && fields.back().back() == '\r')
      fields.back().pop_back();

    if (!saw_columns) {
      if (fields.empty() || fields[0] != "model")
        throw ParseError(path + ": first data row must be the column header", line_no);
      table.columns = static_cast<int>(fields.size()) - 1;
      if (table.columns < 2 || fields.back() != "final")
        throw ParseError(path + ": expected step columns ending in 'final'", line_no);
      saw_columns = true;
      continue;
    }
    if (static_cast<int>(fields.size()) != table.columns + 1)
      throw ParseError(path + ": row has wrong column count", line_no);
    std::vector<double> row;
    for (int i = 1; i <= table.columns; ++i) {
      const double v = std::stod(fields[static_cast<size_t>(i)]);
      if (v < 0.0 || v > 100.0)
        throw ParseError(path + ": rate outside [0, 100]", line_no);
      row.push_back(v);
    }
    if (table.rates.count(fields[0]))
      throw ParseError(path + ": duplicate model row '" + fields[0] + "'", line_no);
    table.models.push_back(fields[0]);
    table.rates[fields[0]] = std::move(row);
  }
  if (!saw_columns || table.models.empty()) throw ParseError(path + ": no rows");
  return table;
}

void StepAccuracyTable::to_csv(const std::string& path, const std::string& header_extra) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write step table: " + path);
  out << "# kmr step-accuracy v1 subset=" << to_string(subset);
  if (!header_extra.empty()) out << " " << header_extra;
  out << "\n";
  out << "model";
  for (int k = 0; k < columns - 1; ++k) out << ",step" << k;
  out << ",final\n";
  for (const auto& model : models) {
    out << model;
    for (const double v : rates.at(model)) out << "," << format_rate(v);
    out << "\n";
  }
}

bool cumulative_monotone(const StepAccuracyTable& table) {
  for (const auto& model : table.models) {
    const auto& row = table.rates.at(model);
    for (size_t k = 0; k + 1 < row.size(); ++k) {
      if (row[k] < row[k + 1]) return false;
    }
  }
  return true;
}

ScoredRun score_run(const std::vector<RunRecord>& records, const BenchmarkRelease& release) {
  ScoredRun out;
  out.date.subset = Subset::date;
  out.zodiac.subset = Subset::zodiac;

  int date_cols = 0, zodiac_cols = 0;
  for (const auto& q : release.date_instances)
    date_cols = std::max(date_cols, static_cast<int>(q.gold.steps.size()));
  for (const auto& q : release.zodiac_instances)
    zodiac_cols = std::max(zodiac_cols, static_cast<int>(q.gold.steps.size()));
  out.date.columns = date_cols;
  out.zodiac.columns = zodiac_cols;

  // model -> per-column pass counts and totals, per subset
  struct Tally {
    std::vector<int64_t> pass;
    int64_t n = 0;
  };
  std::map<std::string, Tally> tallies[2];
  std::vector<std::string> model_order;

  for (const auto& r : records) {
    const QuestionInstance* q = release.find(r.question_id);
    if (!q) throw ParseError("run record references unknown question " + r.question_id);
    const int subset_idx = q->subset == Subset::date ? 0 : 1;
    const int columns = subset_idx == 0 ? date_cols : zodiac_cols;

    auto [it, inserted] = tallies[subset_idx].try_emplace(r.model);
    if (it->second.pass.empty()) it->second.pass.assign(static_cast<size_t>(columns), 0);
    if (std::find(model_order.begin(), model_order.end(), r.model) == model_order.end())
      model_order.push_back(r.model);

    Tally& tally = it->second;
    ++tally.n;
    bool correct = false;
    int failed_step = 0;
    if (r.verdict) {
      correct = r.verdict->correct;
      failed_step = r.verdict->failed_step;
    } else {
      ++out.dropped_records;
    }
    for (int k = 0; k < columns; ++k) {
      const bool pass = k + 1 == columns ? correct : (correct || failed_step > k);
      if (pass) ++tally.pass[static_cast<size_t>(k)];
    }
  }

  for (int s = 0; s < 2; ++s) {
    StepAccuracyTable& table = s == 0 ? out.date : out.zodiac;
    for (const auto& model : model_order) {
      const auto it = tallies[s].find(model);
      if (it == tallies[s].end() || it->second.n == 0) continue;
      std::vector<double> row;
      for (const int64_t count : it->second.pass) {
        row.push_back(100.0 * static_cast<double>(count) / static_cast<double>(it->second.n));
      }
      table.models.push_back(model);
      table.rates[model] = std::move(row);
    }
  }
  return out;
}

std::vector<FinalScore> final_scores(const StepAccuracyTable& date,
                                     const StepAccuracyTable& zodiac) {
  std::vector<FinalScore> out;
  for (const auto& model : date.models) {
    if (!zodiac.rates.count(model)) continue;
    FinalScore fs;
    fs.model = model;
    fs.date = date.final_rate(model);
    fs.zodiac = zodiac.final_rate(model);
    fs.average = (fs.date + fs.zodiac) / 2.0;
    out.push_back(std::move(fs));
  }
  return out;
}

void write_final_scores_csv(const std::string& path, const std::vector<FinalScore>& scores,
                            const std::string& header_extra) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write scores: " + path);
  out << "# kmr final-scores v1";
  if (!header_extra.empty()) out << " " << header_extra;
  out << "\nmodel,date,zodiac,average\n";
  for (const auto& s : scores) {
    out << s.model << "," << format_rate(s.date) << "," << format_rate(s.zodiac) << ","
        << format_rate(s.average) << "\n";
  }
}

}  // namespace kmr
