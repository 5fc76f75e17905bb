// Copyright 2026 The kmr Authors
// SPDX-License-Identifier: Apache-2.0
//
// Grading: the judge prompt pair, verdict parsing, and the deterministic
// rule-based fallback grader used in CI.

#pragma once

#include <string>

#include "kmr/question.hpp"

namespace kmr {

inline constexpr const char* kJudgeSystemPrompt =
    "Please act as an impartial judge and evaluate the quality of the response provided by an "
    "AI assistant to the provided question. You will be given a question, a gold step-by-step "
    "answer, and a response from an AI assistant. Review the response by the AI assistant. "
    "Compare it with the gold step-by-step answer.\n"
    "\n"
    "Begin your evaluation by providing a comparison with the gold answer. Be as objective as "
    "possible. After providing your explanation, return whether the model has reached the "
    "correct answer, and if not specify which step it has first failed at. For example:\n"
    "\n"
    "if correct -> correct: [[true]] step: [[-1]]\n"
    "if wrong -> correct: [[false]] step: [[3]]";

struct JudgePrompt {
  std::string system_text;
  std::string user_text;
};

// Fills the "### Question / ### Gold Answer / ### Model Response" slots;
// stable bytes for identical inputs.
JudgePrompt build_judge_prompt(const QuestionInstance& q, const std::string& response);

struct JudgeVerdict {
  bool correct = false;
  int failed_step = -1;  // -1 when correct
  std::string commentary;
  std::string raw;
};

// Case-insensitive extraction of the last "correct: [[...]]" and
// "step: [[...]]" tokens; enforces the (correct, failed_step) invariant
// against trace_len. Throws MalformedVerdictError.
JudgeVerdict parse_verdict(const std::string& raw, int trace_len);

// Canonical verdict line, the inverse of parse_verdict on valid input.
std::string format_verdict_line(bool correct, int failed_step);

// Deterministic fallback grader: checks that each gold step's key value
// appears in the response (number matching is digit-boundary aware) and
// attributes the first missing step. Strictly a CI substitute for the LLM
// judge: a response phrasing a correct value in an unexpected way is
// counted as a miss.
JudgeVerdict rule_grade(const QuestionInstance& q, const std::string& response);

}  // namespace kmr
