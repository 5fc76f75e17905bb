// Copyright 2026 The kmr Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kmr/date_generator.hpp"
#include "kmr/errors.hpp"
#include "kmr/question.hpp"
#include "kmr/verify.hpp"
#include "kmr/version.hpp"
#include "kmr/zodiac_generator.hpp"

using namespace kmr;

namespace {

const LunisolarTable& table() {
  static const LunisolarTable t =
      LunisolarTable::load(std::string(KMR_DATA_DIR_FOR_TESTS) + "/lunisolar_ko.tsv");
  return t;
}

const Knowledge& kb() {
  static const Knowledge k = Knowledge::load(std::string(KMR_DATA_DIR_FOR_TESTS) + "/kb");
  return k;
}

QuestionInstance reference_date_instance(uint64_t seed = 42) {
  DateGenConfig config;
  config.year = 1999;
  config.event = "새해 첫날";
  config.expression = "이튿날";
  config.day_offset = 57;
  config.target = CalendarKind::lunar;
  return DateGenerator(kb(), table()).from_config(config, seed);
}

BenchmarkRelease small_release() {
  BenchmarkRelease release;
  release.release_id = "test-rel";
  release.generator_version = kGeneratorVersion;
  release.created_at = "2026-01-01T00:00:00Z";
  release.manifest_hash = "0";
  const DateGenerator dg(kb(), table());
  const ZodiacGenerator zg(kb());
  for (uint64_t s = 0; s < 5; ++s) {
    release.date_instances.push_back(dg.generate(s));
    release.zodiac_instances.push_back(zg.generate(s));
  }
  return release;
}

}  // namespace

TEST_CASE("step values serialize with typed payloads") {
  const StepValue date_value = CalendarDate{CalendarKind::lunar, 1999, 1, 13, false};
  CHECK(render_value(date_value) == "1999.1.13");
  CHECK(render_value(StepValue{int64_t{25}}) == "25");
  CHECK(render_value(StepValue{zodiac_of_year(1972)}) == "쥐 (Rat)");

  for (const StepValue& v :
       {date_value, StepValue{int64_t{-3}}, StepValue{zodiac_of_year(1999)},
        StepValue{std::string("current_year=1999 birth_year=1975")}}) {
    CHECK(value_equal(value_from_json(value_to_json(v)), v));
  }
}

TEST_CASE("instance JSON round trips byte-for-byte") {
  const QuestionInstance q = reference_date_instance();
  const std::string line = instance_to_line(q);
  const QuestionInstance back = instance_from_json(nlohmann::ordered_json::parse(line));
  CHECK(instance_to_line(back) == line);
  CHECK(back.id == "date-" + std::string(kGeneratorVersion) + "-42");
}

TEST_CASE("release serialization round trips and counts records") {
  const BenchmarkRelease release = small_release();
  const std::string text = serialize_release(release);
  const BenchmarkRelease back = parse_release(text);
  CHECK(serialize_release(back) == text);
  CHECK(back.date_instances.size() == 5);
  CHECK(back.zodiac_instances.size() == 5);

  int lines = 0;
  for (const char c : text) lines += c == '\n';
  CHECK(lines == 11);  // header + 10 instances
}

TEST_CASE("release parse errors carry line numbers") {
  const BenchmarkRelease release = small_release();
  std::string text = serialize_release(release);

  SUBCASE("missing gold field") {
    nlohmann::ordered_json j = instance_to_json(release.date_instances[2]);
    j.erase("gold");
    std::string broken = text;
    const auto at = broken.find(instance_to_line(release.date_instances[2]));
    REQUIRE(at != std::string::npos);
    broken.replace(at, instance_to_line(release.date_instances[2]).size(), j.dump());
    try {
      parse_release(broken);
      CHECK(false);
    } catch (const ParseError& e) {
      CHECK(e.line() == 4);  // header + 2 instances before it
    }
  }
  SUBCASE("no header") {
    const auto first_newline = text.find('\n');
    CHECK_THROWS_AS(parse_release(text.substr(first_newline + 1)), ParseError);
  }
  SUBCASE("duplicate id") {
    const std::string dup = instance_to_line(release.zodiac_instances[0]);
    CHECK_THROWS_AS(parse_release(text + dup + "\n"), ParseError);
  }
}

TEST_CASE("verify accepts the reference instance and its trace") {
  const QuestionInstance q = reference_date_instance();
  const VerifyReport report = verify_trace(q, table(), kb());
  CHECK(report.ok);
  CHECK(report.first_mismatch == -1);
  CHECK(report.steps_checked == 5);
}

TEST_CASE("verify pinpoints an injected final-step fault") {
  QuestionInstance q = reference_date_instance();
  // Perturb the final value by one day; answer must stay equal to the final
  // step, so perturb both.
  CalendarDate final_value = std::get<CalendarDate>(q.gold.steps[4].value);
  final_value.day += 1;
  q.gold.steps[4].value = final_value;
  q.answer = final_value;

  const VerifyReport report = verify_trace(q, table(), kb());
  CHECK_FALSE(report.ok);
  CHECK(report.first_mismatch == 4);
}

TEST_CASE("verify reports structural defects") {
  QuestionInstance q = reference_date_instance();

  SUBCASE("answer diverging from the final step") {
    q.answer = StepValue{int64_t{7}};
    const VerifyReport report = verify_trace(q, table(), kb());
    CHECK_FALSE(report.ok);
    CHECK(report.detail.find("final step") != std::string::npos);
  }
  SUBCASE("non-contiguous indices") {
    q.gold.steps[3].index = 9;
    const VerifyReport report = verify_trace(q, table(), kb());
    CHECK_FALSE(report.ok);
    CHECK(report.detail.find("contiguous") != std::string::npos);
  }
  SUBCASE("wrong step count") {
    q.gold.steps.pop_back();
    q.answer = q.gold.steps.back().value;
    const VerifyReport report = verify_trace(q, table(), kb());
    CHECK_FALSE(report.ok);
  }
}

TEST_CASE("100 random instances verify cleanly") {
  const DateGenerator dg(kb(), table());
  const ZodiacGenerator zg(kb());
  int ok = 0;
  for (uint64_t seed = 1000; seed < 1050; ++seed) {
    ok += verify_trace(dg.generate(seed), table(), kb()).ok;
    ok += verify_trace(zg.generate(seed), table(), kb()).ok;
  }
  CHECK(ok == 100);
}

TEST_CASE("timestamps honor SOURCE_DATE_EPOCH") {
  setenv("SOURCE_DATE_EPOCH", "946684800", 1);  // 2000-01-01T00:00:00Z
  CHECK(utc_timestamp() == "2000-01-01T00:00:00Z");
  unsetenv("SOURCE_DATE_EPOCH");
}

TEST_CASE("verify pinpoints a perturbed zodiac intermediate") {
  const QuestionInstance original = ZodiacGenerator(kb()).generate(77);
  QuestionInstance q = original;
  REQUIRE(q.gold.steps[1].label == "my_age");
  q.gold.steps[1].value = std::get<int64_t>(q.gold.steps[1].value) + 1;
  const VerifyReport report = verify_trace(q, table(), kb());
  CHECK_FALSE(report.ok);
  CHECK(report.first_mismatch == 1);
}
