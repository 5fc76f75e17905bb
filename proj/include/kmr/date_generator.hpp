// Copyright 2026 The kmr Authors
// SPDX-License-Identifier: Apache-2.0
//
// Seeded generation of Date questions: a cultural event anchors a date, a
// traditional expression shifts it, a day offset is added in solar space,
// and the result is converted to the target calendar. Gold traces always
// have exactly five steps.

#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "kmr/calendar.hpp"
#include "kmr/knowledge.hpp"
#include "kmr/question.hpp"
#include "kmr/rng.hpp"

namespace kmr {

struct DateGenConfig {
  int year = 0;
  std::string event;       // knowledge-base key
  std::string expression;  // knowledge-base key
  int day_offset = 0;      // civil days added at the arithmetic step
  CalendarKind target = CalendarKind::lunar;

  nlohmann::ordered_json to_json() const;
  static DateGenConfig from_json(const nlohmann::json& j);
};

class DateGenerator {
 public:
  // Sampling ranges are part of the versioned generator contract.
  static constexpr int kMinYear = 1950;
  static constexpr int kMaxYear = 2030;
  static constexpr int kMinDayOffset = 1;
  static constexpr int kMaxDayOffset = 100;
  static constexpr int kMaxResamples = 8;

  DateGenerator(const Knowledge& kb, const LunisolarTable& table) : kb_(kb), table_(table) {}

  // Uniform selection over knowledge-base entries and ranges; equal seeds
  // give equal configs.
  DateGenConfig sample_config(uint64_t seed) const;

  // Deterministic instance for the seed; resamples internally (bounded) if
  // the sampled arithmetic would leave the calendar table.
  QuestionInstance generate(uint64_t seed) const;

  // Builds the instance for an explicit config (no sampling).
  QuestionInstance from_config(const DateGenConfig& config, uint64_t seed) const;

 private:
  DateGenConfig sample_from(SplitMix64& rng) const;

  const Knowledge& kb_;
  const LunisolarTable& table_;
};

}  // namespace kmr
