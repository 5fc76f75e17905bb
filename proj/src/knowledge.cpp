// Copyright 2026 The kmr Authors
// SPDX-License-Identifier: Apache-2.0

#include "kmr/knowledge.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "kmr/errors.hpp"

namespace kmr {

const char* to_string(AgeOrder order) {
  switch (order) {
    case AgeOrder::a_elder: return "a_elder";
    case AgeOrder::b_elder: return "b_elder";
    case AgeOrder::same_age: return "same_age";
  }
  return "same_age";
}

int korean_age(int birth_year, int current_year) {
  if (current_year < birth_year)
    throw DomainError("current year " + std::to_string(current_year) + " precedes birth year " +
                      std::to_string(birth_year));
  return current_year - birth_year + 1;
}

const std::vector<ZodiacSign>& zodiac_cycle() {
  static const std::vector<ZodiacSign> cycle = {
      {0, "쥐", "Rat"},     {1, "소", "Ox"},      {2, "호랑이", "Tiger"},
      {3, "토끼", "Rabbit"}, {4, "용", "Dragon"},  {5, "뱀", "Snake"},
      {6, "말", "Horse"},   {7, "양", "Sheep"},   {8, "원숭이", "Monkey"},
      {9, "닭", "Rooster"}, {10, "개", "Dog"},    {11, "돼지", "Pig"},
  };
  return cycle;
}

ZodiacSign zodiac_of_year(int year) {
  const int index = ((year - 4) % 12 + 12) % 12;
  return zodiac_cycle()[static_cast<size_t>(index)];
}

AgeOrder resolve_age_order(const SpeechLevel& level_a, const SpeechLevel& level_b) {
  if (level_a.implies == level_b.implies) return AgeOrder::same_age;
  // A speaking plainly treats B as younger while B's honorifics treat A as
  // elder; both point at A being the elder.
  return level_a.implies == AddresseeImplied::younger ? AgeOrder::a_elder : AgeOrder::b_elder;
}

namespace {

struct TsvFile {
  std::vector<std::vector<std::string>> rows;
  std::vector<int> line_numbers;
};

TsvFile read_tsv(const std::string& path, const std::string& magic, size_t min_fields) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open knowledge table: " + path);

  TsvFile out;
  std::string line;
  int line_no = 0;
  bool saw_magic = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind("# " + magic, 0) == 0) saw_magic = true;
      continue;
    }
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, '\t')) fields.push_back(field);
    if (fields.size() < min_fields)
      throw ParseError(path + ": expected at least " + std::to_string(min_fields) + " fields",
                       line_no);
    out.rows.push_back(std::move(fields));
    out.line_numbers.push_back(line_no);
  }
  if (!saw_magic)
    throw ParseError(path + ": missing or unsupported schema header (want '" + magic + "')");
  if (out.rows.empty()) throw ParseError(path + ": table is empty");
  return out;
}

void require_unique(const std::string& path, const std::vector<std::string>& keys) {
  std::set<std::string> seen;
  for (const auto& k : keys) {
    if (!seen.insert(k).second) throw ParseError(path + ": duplicate entry '" + k + "'");
  }
}

}  // namespace

Knowledge Knowledge::load(const std::string& dir) {
  Knowledge kb;

  {
    const std::string path = dir + "/events.tsv";
    const auto tsv = read_tsv(path, "kmr-kb events v1", 5);
    std::vector<std::string> keys;
    for (size_t i = 0; i < tsv.rows.size(); ++i) {
      const auto& f = tsv.rows[i];
      CulturalEvent ev{f[0], f[1], calendar_kind_from_string(f[2]), std::stoi(f[3]),
                       std::stoi(f[4])};
      if (ev.month < 1 || ev.month > 12 || ev.day < 1 ||
          ev.day > (ev.calendar == CalendarKind::lunar ? 29 : 31))
        throw ParseError(path + ": event '" + ev.name + "' has an invalid month/day",
                         tsv.line_numbers[i]);
      keys.push_back(ev.name);
      kb.events_.push_back(std::move(ev));
    }
    require_unique(path, keys);
  }

  {
    const std::string path = dir + "/expressions.tsv";
    const auto tsv = read_tsv(path, "kmr-kb expressions v1", 3);
    std::vector<std::string> keys;
    for (size_t i = 0; i < tsv.rows.size(); ++i) {
      const auto& f = tsv.rows[i];
      DateExpression ex{f[0], std::stoi(f[1]), f[2]};
      if (ex.offset_days < -4 || ex.offset_days > 4)
        throw ParseError(path + ": expression '" + ex.surface + "' offset out of [-4, 4]",
                         tsv.line_numbers[i]);
      keys.push_back(ex.surface);
      kb.expressions_.push_back(std::move(ex));
    }
    require_unique(path, keys);
  }

  {
    const std::string path = dir + "/relationships.tsv";
    const auto tsv = read_tsv(path, "kmr-kb relationships v1", 4);
    std::vector<std::string> keys;
    for (size_t i = 0; i < tsv.rows.size(); ++i) {
      const auto& f = tsv.rows[i];
      RelationKind kind;
      if (f[2] == "peer") kind = RelationKind::peer;
      else if (f[2] == "senior") kind = RelationKind::senior;
      else if (f[2] == "junior") kind = RelationKind::junior;
      else throw ParseError(path + ": unknown relationship kind '" + f[2] + "'", tsv.line_numbers[i]);

      Relationship rel{f[0], std::stoi(f[1]), kind, f[3]};
      const bool gap_ok = (kind == RelationKind::peer && rel.year_gap == 0) ||
                          (kind == RelationKind::senior && rel.year_gap > 0) ||
                          (kind == RelationKind::junior && rel.year_gap < 0);
      if (!gap_ok)
        throw ParseError(path + ": term '" + rel.term + "' gap inconsistent with its kind",
                         tsv.line_numbers[i]);
      keys.push_back(rel.term);
      kb.relationships_.push_back(std::move(rel));
    }
    require_unique(path, keys);
  }

  {
    const std::string path = dir + "/speech_levels.tsv";
    const auto tsv = read_tsv(path, "kmr-kb speech_levels v1", 3);
    std::vector<std::string> keys;
    for (size_t i = 0; i < tsv.rows.size(); ++i) {
      const auto& f = tsv.rows[i];
      AddresseeImplied implies;
      if (f[1] == "elder") implies = AddresseeImplied::elder;
      else if (f[1] == "younger") implies = AddresseeImplied::younger;
      else throw ParseError(path + ": unknown 'implies' value '" + f[1] + "'", tsv.line_numbers[i]);
      keys.push_back(f[0]);
      kb.speech_levels_.push_back({f[0], implies, f[2]});
    }
    require_unique(path, keys);
    bool has_elder = false, has_younger = false;
    for (const auto& lv : kb.speech_levels_) {
      (lv.implies == AddresseeImplied::elder ? has_elder : has_younger) = true;
    }
    if (!has_elder || !has_younger)
      throw ParseError(path + ": need both honorific and plain levels for pair resolution");
  }

  {
    const std::string path = dir + "/age_modifiers.tsv";
    const auto tsv = read_tsv(path, "kmr-kb age_modifiers v1", 3);
    std::vector<std::string> keys;
    for (size_t i = 0; i < tsv.rows.size(); ++i) {
      const auto& f = tsv.rows[i];
      AgeModifier mod{f[0], std::stoi(f[1]), f[2]};
      if (mod.age_delta < -3 || mod.age_delta > 3 || mod.age_delta == 0)
        throw ParseError(path + ": modifier '" + mod.surface + "' delta out of range",
                         tsv.line_numbers[i]);
      keys.push_back(mod.surface);
      kb.modifiers_.push_back(std::move(mod));
    }
    require_unique(path, keys);
  }

  return kb;
}

Knowledge Knowledge::load_default() { return load(default_data_dir() + "/kb"); }

namespace {
template <typename T, typename Key>
const T& find_or_throw(const std::vector<T>& items, Key T::* key, const std::string& wanted,
                       const char* what) {
  for (const auto& item : items) {
    if (item.*key == wanted) return item;
  }
  throw MissingEntryError(std::string("unknown ") + what + ": " + wanted);
}
}  // namespace

const CulturalEvent& Knowledge::lookup_event(const std::string& name) const {
  return find_or_throw(events_, &CulturalEvent::name, name, "event");
}

const DateExpression& Knowledge::lookup_expression(const std::string& surface) const {
  return find_or_throw(expressions_, &DateExpression::surface, surface, "date expression");
}

const Relationship& Knowledge::lookup_relationship(const std::string& term) const {
  return find_or_throw(relationships_, &Relationship::term, term, "relationship");
}

const SpeechLevel& Knowledge::lookup_speech_level(const std::string& label) const {
  return find_or_throw(speech_levels_, &SpeechLevel::label, label, "speech level");
}

const AgeModifier& Knowledge::lookup_modifier(const std::string& surface) const {
  return find_or_throw(modifiers_, &AgeModifier::surface, surface, "age modifier");
}

}  // namespace kmr
