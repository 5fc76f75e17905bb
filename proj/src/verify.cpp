// Copyright 2026 The kmr Authors
// SPDX-License-Identifier: Apache-2.0
//
// The checks here re-derive expected values directly from the sampled
// parameters; they deliberately do not call the generators, so a defect in
// trace construction cannot hide itself.

#include "kmr/verify.hpp"

#include <vector>

#include "kmr/date_generator.hpp"
#include "kmr/errors.hpp"
#include "kmr/zodiac_generator.hpp"

namespace kmr {

namespace {

struct Expected {
  std::string label;
  StepValue value;
};

std::vector<Expected> expected_date_steps(const DateGenConfig& config, const LunisolarTable& table,
                                          const Knowledge& kb) {
  const CulturalEvent& event = kb.lookup_event(config.event);
  const DateExpression& expr = kb.lookup_expression(config.expression);

  std::vector<Expected> out;
  out.push_back({"year", int64_t{config.year}});

  const CalendarDate event_date{event.calendar, config.year, event.month, event.day, false};
  out.push_back({"event_date", event_date});

  const SolarDate event_solar = table.convert(event_date, CalendarKind::solar).solar();
  const SolarDate birthday_solar = table.add_days(event_solar, expr.offset_days);
  const CalendarDate birthday = table.convert(CalendarDate::from(birthday_solar), event.calendar);
  out.push_back({"expression_offset", birthday});

  const SolarDate shifted = table.add_days(birthday_solar, config.day_offset);
  out.push_back({"day_arithmetic", CalendarDate::from(shifted)});

  out.push_back(
      {"calendar_conversion", table.convert(CalendarDate::from(shifted), config.target)});
  return out;
}

std::vector<Expected> expected_zodiac_steps(const ZodiacGenConfig& config, const Knowledge& kb) {
  const Relationship& rel = kb.lookup_relationship(config.relationship);
  const int my_age = korean_age(config.birth_year, config.current_year);

  int modifier_total = 0;
  for (const auto& m : config.modifiers) modifier_total += kb.lookup_modifier(m).age_delta;

  const AgeOrder order = resolve_age_order(kb.lookup_speech_level(config.speech_level_a),
                                           kb.lookup_speech_level(config.speech_level_b));
  const int a_age = my_age + rel.year_gap + modifier_total;
  const int a_birth_year = config.current_year - a_age + 1;

  std::vector<Expected> out;
  out.push_back({"timeline", std::string("current_year=") + std::to_string(config.current_year) +
                                 " birth_year=" + std::to_string(config.birth_year)});
  out.push_back({"my_age", int64_t{my_age}});
  out.push_back({"relationship_gap", int64_t{rel.year_gap}});
  if (!config.modifiers.empty()) out.push_back({"modifier_total", int64_t{modifier_total}});
  out.push_back({"speech_order", std::string(to_string(order))});
  out.push_back({"a_profile", int64_t{a_birth_year}});
  out.push_back({"zodiac", zodiac_of_year(a_birth_year)});
  return out;
}

VerifyReport fail_at(int step, const std::string& detail, int checked) {
  return {false, step, detail, checked};
}

}  // namespace

VerifyReport verify_trace(const QuestionInstance& q, const LunisolarTable& table,
                          const Knowledge& kb) {
  const auto& steps = q.gold.steps;
  if (steps.empty()) return fail_at(0, "structural: trace has no steps", 0);
  for (size_t i = 0; i < steps.size(); ++i) {
    if (steps[i].index != static_cast<int>(i))
      return fail_at(static_cast<int>(i),
                     "structural: step indices not contiguous at position " + std::to_string(i), 0);
  }
  if (!value_equal(steps.back().value, q.answer))
    return fail_at(steps.back().index, "structural: final step value differs from the answer", 0);

  std::vector<Expected> expected;
  try {
    if (q.subset == Subset::date) {
      if (steps.size() != 5)
        return fail_at(static_cast<int>(steps.size()) - 1,
                       "structural: date trace must have exactly 5 steps, has " +
                           std::to_string(steps.size()),
                       0);
      expected = expected_date_steps(DateGenConfig::from_json(q.params), table, kb);
    } else {
      if (steps.size() > 7)
        return fail_at(static_cast<int>(steps.size()) - 1,
                       "structural: zodiac trace exceeds 7 steps", 0);
      expected = expected_zodiac_steps(ZodiacGenConfig::from_json(q.params), kb);
    }
  } catch (const std::exception& e) {
    return fail_at(0, std::string("params: ") + e.what(), 0);
  }

  if (expected.size() != steps.size())
    return fail_at(static_cast<int>(steps.size()) - 1,
                   "structural: expected " + std::to_string(expected.size()) + " steps, trace has " +
                       std::to_string(steps.size()),
                   0);

  VerifyReport report;
  for (size_t i = 0; i < steps.size(); ++i) {
    if (steps[i].label != expected[i].label)
      return fail_at(static_cast<int>(i),
                     "step " + std::to_string(i) + ": label '" + steps[i].label + "' should be '" +
                         expected[i].label + "'",
                     static_cast<int>(i));
    if (!value_equal(steps[i].value, expected[i].value))
      return fail_at(static_cast<int>(i),
                     "step " + std::to_string(i) + ": value " + render_value(steps[i].value) +
                         " should be " + render_value(expected[i].value),
                     static_cast<int>(i));
    ++report.steps_checked;
  }
  report.ok = true;
  report.first_mismatch = -1;
  report.detail = "consistent (" + std::to_string(report.steps_checked) + "/" +
                  std::to_string(steps.size()) + " steps verified)";
  return report;
}

}  // namespace kmr
