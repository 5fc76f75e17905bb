// Copyright 2026 The kmr Authors
// SPDX-License-Identifier: Apache-2.0
//
// Cultural knowledge base: events, date expressions, university
// relationships, speech levels, age modifiers, plus the Korean age system
// and the 12-animal zodiac cycle. Loaded once from data/kb/*.tsv, then
// immutable.

#pragma once

#include <string>
#include <vector>

#include "kmr/calendar.hpp"

namespace kmr {

struct CulturalEvent {
  std::string name;      // Korean, unique
  std::string gloss;     // English
  CalendarKind calendar = CalendarKind::solar;
  int month = 0;
  int day = 0;
};

struct DateExpression {
  std::string surface;  // Korean, unique
  int offset_days = 0;  // |offset| <= 4
  std::string gloss;
};

enum class RelationKind { peer, senior, junior };

struct Relationship {
  std::string term;  // e.g. "2년 선배"
  int year_gap = 0;  // entry-cohort offset in years; peer 0, senior > 0, junior < 0
  RelationKind kind = RelationKind::peer;
  std::string gloss;
};

// What a speaker's register implies about the addressee's age standing.
enum class AddresseeImplied { elder, younger };

struct SpeechLevel {
  std::string label;  // e.g. "해요체"
  AddresseeImplied implies = AddresseeImplied::elder;
  std::string gloss;
};

struct AgeModifier {
  std::string surface;  // e.g. "재수해서 1년 늦게 입학"
  int age_delta = 0;    // |delta| <= 3
  std::string gloss;
};

struct ZodiacSign {
  int index = 0;  // 0 = Rat ... 11 = Pig
  std::string name_ko;
  std::string name_en;
  auto operator<=>(const ZodiacSign&) const = default;
};

enum class AgeOrder { a_elder, b_elder, same_age };

const char* to_string(AgeOrder order);

// 세는나이: age 1 at birth, +1 every January 1.
int korean_age(int birth_year, int current_year);

// Calendar-year zodiac mapping: index = (year - 4) mod 12, 0 = Rat.
ZodiacSign zodiac_of_year(int year);
const std::vector<ZodiacSign>& zodiac_cycle();

class Knowledge {
 public:
  // Loads and validates every table under dir (data/kb by default).
  static Knowledge load(const std::string& dir);
  static Knowledge load_default();

  const CulturalEvent& lookup_event(const std::string& name) const;
  const DateExpression& lookup_expression(const std::string& surface) const;
  const Relationship& lookup_relationship(const std::string& term) const;
  const SpeechLevel& lookup_speech_level(const std::string& label) const;
  const AgeModifier& lookup_modifier(const std::string& surface) const;

  const std::vector<CulturalEvent>& events() const { return events_; }
  const std::vector<DateExpression>& expressions() const { return expressions_; }
  const std::vector<Relationship>& relationships() const { return relationships_; }
  const std::vector<SpeechLevel>& speech_levels() const { return speech_levels_; }
  const std::vector<AgeModifier>& modifiers() const { return modifiers_; }

 private:
  std::vector<CulturalEvent> events_;
  std::vector<DateExpression> expressions_;
  std::vector<Relationship> relationships_;
  std::vector<SpeechLevel> speech_levels_;
  std::vector<AgeModifier> modifiers_;
};

// Deterministic pair rule: asymmetric honorific usage makes the
// plain-speech speaker the elder; symmetric usage means peers.
AgeOrder resolve_age_order(const SpeechLevel& level_a, const SpeechLevel& level_b);

}  // namespace kmr
