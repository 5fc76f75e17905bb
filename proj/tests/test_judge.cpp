// Copyright 2026 The kmr Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kmr/date_generator.hpp"
#include "kmr/errors.hpp"
#include "kmr/judge.hpp"
#include "kmr/rng.hpp"
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

QuestionInstance sample_date_instance() {
  return DateGenerator(kb(), table()).generate(42);
}

}  // namespace

TEST_CASE("judge prompt carries the canonical instructions and slots") {
  const QuestionInstance q = sample_date_instance();
  const JudgePrompt prompt = build_judge_prompt(q, "model says something");

  CHECK(prompt.system_text.find("Please act as an impartial judge and evaluate the quality of "
                                "the response") != std::string::npos);
  CHECK(prompt.system_text.find("if correct -> correct: [[true]] step: [[-1]]") !=
        std::string::npos);
  CHECK(prompt.system_text.find("if wrong -> correct: [[false]] step: [[3]]") !=
        std::string::npos);

  CHECK(prompt.user_text.find("### Question : \n" + q.question_ko) != std::string::npos);
  CHECK(prompt.user_text.find("### Gold Answer : \n" + gold_block(q)) != std::string::npos);
  CHECK(prompt.user_text.find("### Model Response : \nmodel says something") !=
        std::string::npos);

  // Gold steps appear in order.
  size_t pos = 0;
  for (const auto& s : q.gold.steps) {
    const size_t at = prompt.user_text.find("STEP " + std::to_string(s.index) + ": ", pos);
    CHECK(at != std::string::npos);
    pos = at;
  }

  const JudgePrompt again = build_judge_prompt(q, "model says something");
  CHECK(again.system_text == prompt.system_text);
  CHECK(again.user_text == prompt.user_text);
}

TEST_CASE("verdict parsing accepts both canonical forms") {
  const JudgeVerdict ok = parse_verdict("correct: [[true]] step: [[-1]]", 5);
  CHECK(ok.correct);
  CHECK(ok.failed_step == -1);

  const JudgeVerdict wrong = parse_verdict("Correct: [[false]] Step: [[3]]", 5);
  CHECK_FALSE(wrong.correct);
  CHECK(wrong.failed_step == 3);

  // Commentary before the verdict, as judges produce in practice.
  const JudgeVerdict with_prose = parse_verdict(
      "The assistant drifted at the conversion.\nFor example: correct: [[true]] step: [[-1]]\n"
      "Final call -> Correct: [[false]] Step: [[2]]",
      5);
  CHECK_FALSE(with_prose.correct);
  CHECK(with_prose.failed_step == 2);
}

TEST_CASE("contradictory or missing verdict tokens are malformed") {
  CHECK_THROWS_AS(parse_verdict("correct: [[true]] step: [[2]]", 5), MalformedVerdictError);
  CHECK_THROWS_AS(parse_verdict("correct: [[false]] step: [[-1]]", 5), MalformedVerdictError);
  CHECK_THROWS_AS(parse_verdict("correct: [[false]] step: [[9]]", 5), MalformedVerdictError);
  CHECK_THROWS_AS(parse_verdict("correct: [[true]]", 5), MalformedVerdictError);
  CHECK_THROWS_AS(parse_verdict("step: [[1]]", 5), MalformedVerdictError);
  CHECK_THROWS_AS(parse_verdict("no brackets at all", 5), MalformedVerdictError);
}

TEST_CASE("1000 randomized valid verdicts round trip") {
  SplitMix64 rng(0x7e57);
  for (int i = 0; i < 1000; ++i) {
    const int trace_len = static_cast<int>(rng.between(5, 7));
    const bool correct = rng.below(2) == 0;
    const int step = correct ? -1 : static_cast<int>(rng.between(0, trace_len - 1));
    const std::string line = format_verdict_line(correct, step);
    const JudgeVerdict v = parse_verdict("Comparison text (" + std::to_string(i) + ")\n" + line,
                                         trace_len);
    CHECK(v.correct == correct);
    CHECK(v.failed_step == step);
    CHECK(format_verdict_line(v.correct, v.failed_step) == line);
  }
}

TEST_CASE("rule judge accepts a gold echo and attributes a redacted step") {
  const QuestionInstance q = sample_date_instance();

  const JudgeVerdict echoed = rule_grade(q, gold_block(q));
  CHECK(echoed.correct);
  CHECK(echoed.failed_step == -1);

  // Redact from step 2 on, as the scripted wrong-model endpoint does.
  std::string partial;
  for (const auto& s : q.gold.steps) {
    if (!partial.empty()) partial += '\n';
    partial += "STEP " + std::to_string(s.index) + ": ";
    partial += s.index < 2 ? s.text : "(생략)";
  }
  const JudgeVerdict failed = rule_grade(q, partial);
  CHECK_FALSE(failed.correct);
  CHECK(failed.failed_step == 2);
}

TEST_CASE("rule judge number matching is digit-boundary aware") {
  const QuestionInstance q = ZodiacGenerator(kb()).generate(5);
  // A response that only contains years stuck to other digits must not
  // satisfy small integer steps like the cohort gap.
  const JudgeVerdict v = rule_grade(q, "199919751234567890");
  CHECK_FALSE(v.correct);
  CHECK(v.failed_step >= 0);
}

TEST_CASE("rule judge handles zodiac traces end to end") {
  const ZodiacGenerator gen(kb());
  for (uint64_t seed = 100; seed < 150; ++seed) {
    const QuestionInstance q = gen.generate(seed);
    CHECK(rule_grade(q, gold_block(q)).correct);
    const JudgeVerdict at2 = [&] {
      std::string partial;
      for (const auto& s : q.gold.steps) {
        if (!partial.empty()) partial += '\n';
        partial += "STEP " + std::to_string(s.index) + ": ";
        partial += s.index < 2 ? s.text : "(생략)";
      }
      return rule_grade(q, partial);
    }();
    CHECK_FALSE(at2.correct);
    CHECK(at2.failed_step == 2);
  }
}
