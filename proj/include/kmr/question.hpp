// Copyright 2026 The kmr Authors
// SPDX-License-Identifier: Apache-2.0
//
// Canonical data model: questions, gold step traces, and the line-delimited
// release format. Serialization uses a fixed field order so that equal
// (subset, seed, generator_version) always reproduces identical bytes.

#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "kmr/calendar.hpp"
#include "kmr/knowledge.hpp"

namespace kmr {

enum class Subset { date, zodiac };

const char* to_string(Subset subset);
Subset subset_from_string(const std::string& s);

// Typed payload carried by every trace step: integer, tagged date, zodiac
// sign, or free text.
using StepValue = std::variant<int64_t, CalendarDate, ZodiacSign, std::string>;

bool value_equal(const StepValue& a, const StepValue& b);
// Human rendering used in prompts and value matching: 25 / "1999.1.13" /
// "쥐 (Rat)" / the text itself.
std::string render_value(const StepValue& v);
nlohmann::ordered_json value_to_json(const StepValue& v);
StepValue value_from_json(const nlohmann::json& j);

struct TraceStep {
  int index = 0;
  std::string label;
  std::string text;
  StepValue value;
};

struct StepTrace {
  std::vector<TraceStep> steps;
  const TraceStep& final_step() const { return steps.back(); }
  size_t size() const { return steps.size(); }
};

struct QuestionInstance {
  std::string id;  // "{subset}-{generator_version}-{seed}"
  Subset subset = Subset::date;
  uint64_t seed = 0;
  std::string generator_version;
  std::string question_ko;  // canonical for grading
  std::string question_en;
  nlohmann::ordered_json params;  // sampled generator config; verify re-derives from this
  StepTrace gold;
  StepValue answer;
};

std::string make_instance_id(Subset subset, const std::string& version, uint64_t seed);

nlohmann::ordered_json instance_to_json(const QuestionInstance& q);
QuestionInstance instance_from_json(const nlohmann::ordered_json& j);
std::string instance_to_line(const QuestionInstance& q);

// "STEP 0: ...\nSTEP 1: ...", the gold block shown to the judge.
std::string gold_block(const QuestionInstance& q);

struct BenchmarkRelease {
  std::string release_id;
  std::string generator_version;
  std::string created_at;  // ISO-8601 UTC
  std::string manifest_hash;
  std::vector<QuestionInstance> date_instances;
  std::vector<QuestionInstance> zodiac_instances;

  std::vector<const QuestionInstance*> all() const;
  const QuestionInstance* find(const std::string& id) const;
  const QuestionInstance* find_by_question(const std::string& question_ko) const;
};

std::string serialize_release(const BenchmarkRelease& release);
BenchmarkRelease parse_release(const std::string& text);
void write_release(const std::string& path, const BenchmarkRelease& release);
BenchmarkRelease read_release(const std::string& path);

// Current UTC time as "YYYY-MM-DDTHH:MM:SSZ"; honors SOURCE_DATE_EPOCH for
// reproducible output files.
std::string utc_timestamp();

}  // namespace kmr
