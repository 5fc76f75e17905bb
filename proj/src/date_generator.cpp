// Copyright 2026 The kmr Authors
// SPDX-License-Identifier: Apache-2.0

#include "kmr/date_generator.hpp"

#include <cstdio>

#include "kmr/errors.hpp"
#include "kmr/korean_text.hpp"
#include "kmr/version.hpp"

namespace kmr {

namespace {

std::string signed_offset(int n) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%+d", n);
  return buf;
}

// "1999.1.2" for solar, "lunar 1999.1.2" for lunar, when a date appears
// mid-sentence.
std::string date_in_text(const CalendarDate& d) {
  return d.kind == CalendarKind::lunar ? "lunar " + format_lunar(d.lunar())
                                       : format_solar(d.solar());
}

}  // namespace

nlohmann::ordered_json DateGenConfig::to_json() const {
  return {{"year", year},
          {"event", event},
          {"expression", expression},
          {"day_offset", day_offset},
          {"target_calendar", to_string(target)}};
}

DateGenConfig DateGenConfig::from_json(const nlohmann::json& j) {
  DateGenConfig c;
  c.year = j.at("year").get<int>();
  c.event = j.at("event").get<std::string>();
  c.expression = j.at("expression").get<std::string>();
  c.day_offset = j.at("day_offset").get<int>();
  c.target = calendar_kind_from_string(j.at("target_calendar").get<std::string>());
  return c;
}

DateGenConfig DateGenerator::sample_from(SplitMix64& rng) const {
  DateGenConfig c;
  c.year = static_cast<int>(rng.between(kMinYear, kMaxYear));
  c.event = rng.pick(kb_.events()).name;
  c.expression = rng.pick(kb_.expressions()).surface;
  c.day_offset = static_cast<int>(rng.between(kMinDayOffset, kMaxDayOffset));
  c.target = rng.below(2) == 0 ? CalendarKind::solar : CalendarKind::lunar;
  return c;
}

DateGenConfig DateGenerator::sample_config(uint64_t seed) const {
  SplitMix64 rng(seed);
  return sample_from(rng);
}

QuestionInstance DateGenerator::generate(uint64_t seed) const {
  SplitMix64 rng(seed);
  for (int attempt = 0;; ++attempt) {
    const DateGenConfig config = sample_from(rng);
    try {
      return from_config(config, seed);
    } catch (const RangeError&) {
      if (attempt + 1 >= kMaxResamples) throw;
    }
  }
}

QuestionInstance DateGenerator::from_config(const DateGenConfig& config, uint64_t seed) const {
  const CulturalEvent& event = kb_.lookup_event(config.event);
  const DateExpression& expr = kb_.lookup_expression(config.expression);

  // S1: the event's date in its own calendar for the question's year.
  CalendarDate event_date{event.calendar, config.year, event.month, event.day, false};
  if (event.calendar == CalendarKind::lunar && !table_.contains(event_date.lunar()))
    throw RangeError("event " + event.name + " does not exist in lunar year " +
                     std::to_string(config.year));

  // S2: the expression's day offset, applied within the event's calendar.
  const SolarDate event_solar = table_.convert(event_date, CalendarKind::solar).solar();
  const SolarDate birthday_solar = table_.add_days(event_solar, expr.offset_days);
  const CalendarDate birthday =
      table_.convert(CalendarDate::from(birthday_solar), event_date.kind);

  // S3: convert to solar if needed, then add the day offset.
  const SolarDate base_solar = table_.convert(birthday, CalendarKind::solar).solar();
  const SolarDate shifted = table_.add_days(base_solar, config.day_offset);
  const CalendarDate shifted_date = CalendarDate::from(shifted);

  // S4: express the result in the target calendar.
  const CalendarDate answer = table_.convert(shifted_date, config.target);

  StepTrace trace;
  trace.steps.push_back(
      {0, "year", "Year is " + std::to_string(config.year) + ".", int64_t{config.year}});

  const std::string event_md = std::to_string(event.month) + "." + std::to_string(event.day);
  trace.steps.push_back({1, "event_date",
                         event.calendar == CalendarKind::lunar
                             ? "The " + event.name + " is lunar " + event_md
                             : "The " + event.name + " is " + event_md,
                         event_date});

  trace.steps.push_back({2, "expression_offset",
                         "Expression='" + expr.surface + "' (offset=" +
                             signed_offset(expr.offset_days) + "), so birthday is " +
                             date_in_text(birthday),
                         birthday});

  std::string arithmetic;
  if (birthday.kind == CalendarKind::lunar) {
    arithmetic = "Converting " + date_in_text(birthday) + " to solar: " +
                 format_solar(base_solar) + ", adding " + std::to_string(config.day_offset) +
                 " days → " + format_solar(shifted) + " (solar)";
  } else {
    arithmetic = "Adding " + std::to_string(config.day_offset) + " days to " +
                 format_solar(base_solar) + " → " + format_solar(shifted) + " (solar)";
  }
  trace.steps.push_back({3, "day_arithmetic", arithmetic, shifted_date});

  trace.steps.push_back({4, "calendar_conversion",
                         config.target == CalendarKind::lunar
                             ? "Converting to lunar: " + format_solar(shifted) + " → " +
                                   format_lunar(answer.lunar())
                             : "Target calendar is solar: " + format_solar(shifted) +
                                   " needs no conversion",
                         answer});

  QuestionInstance q;
  q.subset = Subset::date;
  q.seed = seed;
  q.generator_version = kGeneratorVersion;
  q.id = make_instance_id(q.subset, q.generator_version, seed);
  q.params = config.to_json();
  q.gold = std::move(trace);
  q.answer = answer;

  const std::string target_ko = config.target == CalendarKind::lunar ? "음력" : "양력";
  const std::string target_en = config.target == CalendarKind::lunar ? "lunar" : "solar";
  q.question_ko = std::to_string(config.year) + "년 " + event.name + "에 누군가 \"" +
                  expr.surface + "\"" + subject_particle(expr.surface) +
                  " 내 생일이라고 말하는 것을 들었다. 그 생일로부터 " +
                  std::to_string(config.day_offset) + "일 후는 " + target_ko +
                  "으로 며칠인가?";
  q.question_en = "On " + event.name + " (" + event.gloss + ") in " +
                  std::to_string(config.year) + ", I heard someone say \"" + expr.surface +
                  "\" (" + expr.gloss + ") was my birthday. What is the " + target_en +
                  " calendar date " + std::to_string(config.day_offset) +
                  " days after that birthday?";
  return q;
}

}  // namespace kmr
