// Copyright 2026 The kmr Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "kmr/errors.hpp"
#include "kmr/knowledge.hpp"
#include "kmr/rng.hpp"

using namespace kmr;

namespace {
const Knowledge& kb() {
  static const Knowledge k = Knowledge::load(std::string(KMR_DATA_DIR_FOR_TESTS) + "/kb");
  return k;
}
}  // namespace

TEST_CASE("knowledge base ships the curated minimums") {
  CHECK(kb().events().size() >= 10);
  CHECK(kb().expressions().size() >= 8);
  CHECK(kb().relationships().size() >= 6);
  CHECK(kb().speech_levels().size() >= 4);
  CHECK(kb().modifiers().size() >= 6);

  int solar = 0, lunar = 0;
  for (const auto& ev : kb().events()) {
    (ev.calendar == CalendarKind::solar ? solar : lunar)++;
  }
  CHECK(solar >= 3);
  CHECK(lunar >= 3);
}

TEST_CASE("anchored lookups") {
  const auto& new_year = kb().lookup_event("새해 첫날");
  CHECK(new_year.calendar == CalendarKind::solar);
  CHECK(new_year.month == 1);
  CHECK(new_year.day == 1);

  const auto& next_day = kb().lookup_expression("이튿날");
  CHECK(next_day.offset_days == 1);

  const auto& seollal = kb().lookup_event("설날");
  CHECK(seollal.calendar == CalendarKind::lunar);
  CHECK(seollal.month == 1);
  CHECK(seollal.day == 1);

  CHECK_THROWS_AS(kb().lookup_event("없는 명절"), MissingEntryError);
  CHECK_THROWS_AS(kb().lookup_expression("없는 표현"), MissingEntryError);
}

TEST_CASE("korean age examples and shift property") {
  CHECK(korean_age(1999, 1999) == 1);
  CHECK(korean_age(1990, 1999) == 10);
  CHECK(korean_age(1975, 1999) == 25);
  CHECK_THROWS_AS(korean_age(2000, 1999), DomainError);

  SplitMix64 rng(0xa9e);
  for (int i = 0; i < 10000; ++i) {
    const int birth = static_cast<int>(rng.between(1900, 2049));
    const int k = static_cast<int>(rng.between(0, 120));
    CHECK(korean_age(birth, birth + k) - korean_age(birth, birth) == k);
  }
}

TEST_CASE("zodiac examples, cycle, and surjectivity") {
  CHECK(zodiac_of_year(1984).name_en == "Rat");
  CHECK(zodiac_of_year(1984).index == 0);
  CHECK(zodiac_of_year(1999).name_en == "Rabbit");
  CHECK(zodiac_of_year(1999).name_ko == "토끼");
  CHECK(zodiac_of_year(1972).name_en == "Rat");

  SplitMix64 rng(0x20d1ac);
  for (int i = 0; i < 10000; ++i) {
    const int y = static_cast<int>(rng.between(1, 3000));
    CHECK(zodiac_of_year(y) == zodiac_of_year(y + 12));
    CHECK(zodiac_of_year(y).index == ((y - 4) % 12 + 12) % 12);
  }
  for (int start = 1900; start < 1930; ++start) {
    std::set<int> seen;
    for (int y = start; y < start + 12; ++y) seen.insert(zodiac_of_year(y).index);
    CHECK(seen.size() == 12);
  }
}

TEST_CASE("speech level pairs resolve deterministically and mirror") {
  const auto& formal = kb().lookup_speech_level("합쇼체");    // honorific
  const auto& polite = kb().lookup_speech_level("해요체");    // honorific
  const auto& plain = kb().lookup_speech_level("해라체");     // plain
  const auto& casual = kb().lookup_speech_level("해체");      // plain

  CHECK(resolve_age_order(plain, polite) == AgeOrder::a_elder);
  CHECK(resolve_age_order(polite, plain) == AgeOrder::b_elder);
  CHECK(resolve_age_order(plain, plain) == AgeOrder::same_age);
  CHECK(resolve_age_order(formal, polite) == AgeOrder::same_age);
  CHECK(resolve_age_order(casual, formal) == AgeOrder::a_elder);

  for (const auto& a : kb().speech_levels()) {
    for (const auto& b : kb().speech_levels()) {
      const AgeOrder ab = resolve_age_order(a, b);
      const AgeOrder ba = resolve_age_order(b, a);
      if (ab == AgeOrder::same_age) {
        CHECK(ba == AgeOrder::same_age);
      } else {
        CHECK(((ab == AgeOrder::a_elder && ba == AgeOrder::b_elder) ||
               (ab == AgeOrder::b_elder && ba == AgeOrder::a_elder)));
      }
    }
  }
}

TEST_CASE("relationship gaps are consistent with their kinds") {
  for (const auto& rel : kb().relationships()) {
    switch (rel.kind) {
      case RelationKind::peer: CHECK(rel.year_gap == 0); break;
      case RelationKind::senior: CHECK(rel.year_gap > 0); break;
      case RelationKind::junior: CHECK(rel.year_gap < 0); break;
    }
  }
  CHECK(kb().lookup_relationship("동기").year_gap == 0);
  CHECK(kb().lookup_relationship("2년 선배").year_gap == 2);
  CHECK(kb().lookup_relationship("3년 후배").year_gap == -3);
}

TEST_CASE("malformed knowledge tables are rejected at load") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "kmr_bad_kb";
  fs::remove_all(dir);
  fs::create_directories(dir);
  for (const char* name :
       {"events.tsv", "expressions.tsv", "relationships.tsv", "speech_levels.tsv",
        "age_modifiers.tsv"}) {
    fs::copy_file(fs::path(KMR_DATA_DIR_FOR_TESTS) / "kb" / name, dir / name);
  }

  SUBCASE("duplicate event name") {
    std::ofstream(dir / "events.tsv", std::ios::app)
        << "새해 첫날\tduplicate\tsolar\t1\t1\tdup\n";
    CHECK_THROWS_AS(Knowledge::load(dir.string()), ParseError);
  }
  SUBCASE("expression offset outside the bound") {
    std::ofstream(dir / "expressions.tsv", std::ios::app) << "닷새 뒤\t5\tfive days later\tx\n";
    CHECK_THROWS_AS(Knowledge::load(dir.string()), ParseError);
  }
  SUBCASE("senior with non-positive gap") {
    std::ofstream(dir / "relationships.tsv", std::ios::app) << "가짜 선배\t0\tsenior\tbad\n";
    CHECK_THROWS_AS(Knowledge::load(dir.string()), ParseError);
  }
  SUBCASE("unknown schema header") {
    std::ofstream(dir / "age_modifiers.tsv") << "# kmr-kb age_modifiers v9\nx\t1\ty\n";
    CHECK_THROWS_AS(Knowledge::load(dir.string()), ParseError);
  }
  fs::remove_all(dir);
}
