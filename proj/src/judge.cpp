// Copyright 2026 The kmr Authors
// SPDX-License-Identifier: Apache-2.0

#include "kmr/judge.hpp"

#include <cctype>
#include <regex>

#include "kmr/errors.hpp"

namespace kmr {

JudgePrompt build_judge_prompt(const QuestionInstance& q, const std::string& response) {
  JudgePrompt prompt;
  prompt.system_text = kJudgeSystemPrompt;
  prompt.user_text = "### Question : \n" + q.question_ko + "\n\n### Gold Answer : \n" +
                     gold_block(q) + "\n\n### Model Response : \n" + response;
  return prompt;
}

std::string format_verdict_line(bool correct, int failed_step) {
  return std::string("correct: [[") + (correct ? "true" : "false") + "]] step: [[" +
         std::to_string(failed_step) + "]]";
}

JudgeVerdict parse_verdict(const std::string& raw, int trace_len) {
  static const std::regex correct_re(R"(correct\s*:\s*\[\[\s*(true|false)\s*\]\])",
                                     std::regex::icase);
  static const std::regex step_re(R"(step\s*:\s*\[\[\s*(-?\d+)\s*\]\])", std::regex::icase);

  // Judges often restate the format while reasoning; the last occurrence is
  // the verdict.
  std::string correct_token;
  for (auto it = std::sregex_iterator(raw.begin(), raw.end(), correct_re);
       it != std::sregex_iterator(); ++it) {
    correct_token = (*it)[1].str();
  }
  std::string step_token;
  for (auto it = std::sregex_iterator(raw.begin(), raw.end(), step_re);
       it != std::sregex_iterator(); ++it) {
    step_token = (*it)[1].str();
  }

  if (correct_token.empty() || step_token.empty())
    throw MalformedVerdictError("verdict tokens missing from judge output");

  JudgeVerdict v;
  for (auto& c : correct_token) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  v.correct = correct_token == "true";
  v.failed_step = std::stoi(step_token);
  v.raw = raw;

  if (v.correct && v.failed_step != -1)
    throw MalformedVerdictError("verdict says correct but names step " +
                                std::to_string(v.failed_step));
  if (!v.correct && (v.failed_step < 0 || v.failed_step >= trace_len))
    throw MalformedVerdictError("failed step " + std::to_string(v.failed_step) +
                                " outside trace of length " + std::to_string(trace_len));
  return v;
}

namespace {

bool is_ascii_digit(char c) { return c >= '0' && c <= '9'; }

// Substring match where the needle's edges must not continue a digit run,
// so age "2" is not found inside "2027" and "1999.1.2" not in "1999.1.23".
bool contains_bounded(const std::string& hay, const std::string& needle) {
  if (needle.empty()) return false;
  size_t pos = 0;
  while ((pos = hay.find(needle, pos)) != std::string::npos) {
    const bool left_ok =
        pos == 0 || !is_ascii_digit(hay[pos - 1]) || !is_ascii_digit(needle.front());
    const size_t end = pos + needle.size();
    const bool right_ok =
        end == hay.size() || !is_ascii_digit(hay[end]) || !is_ascii_digit(needle.back());
    if (left_ok && right_ok) return true;
    ++pos;
  }
  return false;
}

std::string signed_int(int64_t n) {
  return n < 0 ? std::to_string(n) : "+" + std::to_string(n);
}

std::vector<std::string> step_match_keys(const TraceStep& step) {
  struct Keys {
    const TraceStep& step;
    std::vector<std::string> operator()(int64_t n) const {
      // Bare small integers collide with unrelated digits; anchor the
      // premise-delta steps to their phrasing instead.
      if (step.label == "relationship_gap") return {"gap is " + signed_int(n) + " years"};
      if (step.label == "modifier_total") return {"modifiers total " + signed_int(n)};
      return {std::to_string(n)};
    }
    std::vector<std::string> operator()(const CalendarDate& d) const {
      // The event-date step states month.day only; the later steps carry
      // full dates.
      if (step.label == "event_date")
        return {std::to_string(d.month) + "." + std::to_string(d.day)};
      return {format_date(d)};
    }
    std::vector<std::string> operator()(const ZodiacSign& s) const {
      return {s.name_ko + " (" + s.name_en + ")"};
    }
    std::vector<std::string> operator()(const std::string& text) const {
      if (step.label == "timeline") {
        // value form: "current_year=YYYY birth_year=YYYY"
        std::vector<std::string> keys;
        for (size_t at = 0; (at = text.find('=', at)) != std::string::npos;) {
          ++at;
          size_t end = at;
          while (end < text.size() && is_ascii_digit(text[end])) ++end;
          keys.push_back(text.substr(at, end - at));
          at = end;
        }
        return keys;
      }
      if (step.label == "speech_order") {
        if (text == "a_elder") return {"A is older"};
        if (text == "b_elder") return {"A is younger"};
        return {"the same age"};
      }
      return {text};
    }
  };
  return std::visit(Keys{step}, step.value);
}

}  // namespace

JudgeVerdict rule_grade(const QuestionInstance& q, const std::string& response) {
  // "STEP n:" markers are structure, not content; their digits must not
  // satisfy numeric keys.
  static const std::regex step_marker(R"(STEP\s+\d+\s*:)", std::regex::icase);
  const std::string body = std::regex_replace(response, step_marker, " ");

  int matched = 0;
  int first_missing = -1;
  for (const auto& step : q.gold.steps) {
    bool found = true;
    for (const auto& key : step_match_keys(step)) {
      if (!contains_bounded(body, key)) {
        found = false;
        break;
      }
    }
    if (!found) {
      first_missing = step.index;
      break;
    }
    ++matched;
  }

  JudgeVerdict v;
  v.correct = first_missing == -1;
  v.failed_step = first_missing;
  v.commentary = "rule judge: matched " + std::to_string(matched) + "/" +
                 std::to_string(q.gold.steps.size()) + " gold step values";
  v.raw = v.commentary + "\n" + format_verdict_line(v.correct, v.failed_step);
  return v;
}

}  // namespace kmr
