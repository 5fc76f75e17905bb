// Copyright 2026 The kmr Authors
// SPDX-License-Identifier: Apache-2.0

#include "kmr/zodiac_generator.hpp"

#include <algorithm>
#include <array>
#include <cstdio>

#include "kmr/errors.hpp"
#include "kmr/korean_text.hpp"
#include "kmr/version.hpp"

namespace kmr {

namespace {

std::string signed_years(int n) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%+d", n);
  return buf;
}

// Dialogue line templates, one variant per speech level, indexed in the
// order below. Honorific variants all end in 니다./니까?/십시오./세요./요.
// endings and plain variants never do; the audit tests rely on that.
const std::array<std::string, 4> kLevelOrder = {"합쇼체", "해요체", "해라체", "해체"};

struct LineBank {
  std::array<std::string, 4> variants;
  const std::string& for_level(const std::string& label) {
    for (size_t i = 0; i < kLevelOrder.size(); ++i) {
      if (kLevelOrder[i] == label) return variants[i];
    }
    throw MissingEntryError("no dialogue template for speech level: " + label);
  }
};

LineBank greet() {
  return {{"{year}년 새해가 밝았습니다. 복 많이 받으십시오.",
           "{year}년 새해가 밝았어요. 복 많이 받으세요.",
           "{year}년 새해가 밝았다. 복 많이 받아라.",
           "{year}년 새해가 밝았어. 복 많이 받아."}};
}

LineBank greet_back() {
  return {{"감사합니다. 오랜만에 뵙습니다.", "고마워요. 오랜만이에요.",
           "고맙다. 오랜만이구나.", "고마워. 오랜만이야."}};
}

LineBank my_birth() {
  return {{"저는 {year}년생입니다.", "저는 {year}년생이에요.",
           "나는 {year}년생이다.", "나는 {year}년생이야."}};
}

LineBank relationship_line(RelationKind kind) {
  if (kind == RelationKind::peer) {
    return {{"우리는 {term}입니다.", "우리는 {term}예요.",
             "우리는 {term}다.", "우리는 {term}야."}};
  }
  return {{"제가 {term}입니다.", "제가 {term}예요.",
           "내가 {term}다.", "내가 {term}야."}};
}

LineBank ack() {
  return {{"네, 세월이 참 빠릅니다.", "네, 세월이 참 빨라요.",
           "그래, 세월이 참 빠르다.", "응, 세월이 참 빨라."}};
}

LineBank modifier_line() {
  return {{"사실 저는 {surface}했습니다.", "사실 저는 {surface}했어요.",
           "사실 나는 {surface}했다.", "사실 나는 {surface}했어."}};
}

LineBank closing() {
  return {{"오늘 만나서 반가웠습니다.", "오늘 만나서 반가웠어요.",
           "오늘 만나서 반가웠다.", "오늘 만나서 반가웠어."}};
}

LineBank closing_ack() {
  return {{"네, 다음에 또 뵙겠습니다.", "네, 다음에 또 봬요.",
           "그래, 다음에 또 보자.", "응, 다음에 또 봐."}};
}

std::vector<LineBank> fillers() {
  return {
      {{"요즘 건강은 어떠십니까?", "요즘 건강은 어때요?",
        "요즘 건강은 어떠냐?", "요즘 건강은 어때?"}},
      {{"날씨가 많이 풀렸습니다.", "날씨가 많이 풀렸어요.",
        "날씨가 많이 풀렸다.", "날씨가 많이 풀렸어."}},
      {{"하시는 일은 잘되십니까?", "하는 일은 잘돼요?",
        "하는 일은 잘되냐?", "하는 일은 잘돼?"}},
      {{"올해도 잘 부탁드립니다.", "올해도 잘 부탁해요.",
        "올해도 잘 부탁한다.", "올해도 잘 부탁해."}},
      {{"지내시는 동네는 여전하십니까?", "지내는 동네는 여전해요?",
        "지내는 동네는 여전하냐?", "지내는 동네는 여전해?"}},
      {{"커피라도 한잔하시지요.", "커피라도 한잔해요.",
        "커피라도 한잔하자.", "커피라도 한잔할까."}},
  };
}

}  // namespace

nlohmann::ordered_json ZodiacGenConfig::to_json() const {
  return {{"birth_year", birth_year},
          {"current_year", current_year},
          {"relationship", relationship},
          {"modifiers", modifiers},
          {"speech_level_a", speech_level_a},
          {"speech_level_b", speech_level_b}};
}

ZodiacGenConfig ZodiacGenConfig::from_json(const nlohmann::json& j) {
  ZodiacGenConfig c;
  c.birth_year = j.at("birth_year").get<int>();
  c.current_year = j.at("current_year").get<int>();
  c.relationship = j.at("relationship").get<std::string>();
  c.modifiers = j.at("modifiers").get<std::vector<std::string>>();
  c.speech_level_a = j.at("speech_level_a").get<std::string>();
  c.speech_level_b = j.at("speech_level_b").get<std::string>();
  return c;
}

int ZodiacGenerator::net_age_gap(const ZodiacGenConfig& config) const {
  int gap = kb_.lookup_relationship(config.relationship).year_gap;
  for (const auto& m : config.modifiers) gap += kb_.lookup_modifier(m).age_delta;
  return gap;
}

ZodiacGenConfig ZodiacGenerator::sample_from(SplitMix64& rng) const {
  ZodiacGenConfig c;
  c.current_year = static_cast<int>(rng.between(kMinYear, kMaxYear));
  const int my_age = static_cast<int>(rng.between(kMinNarratorAge, kMaxNarratorAge));
  c.birth_year = c.current_year - my_age + 1;
  c.relationship = rng.pick(kb_.relationships()).term;
  const int n_mods = static_cast<int>(rng.below(kMaxModifiers + 1));
  while (static_cast<int>(c.modifiers.size()) < n_mods) {
    const std::string& pick = rng.pick(kb_.modifiers()).surface;
    if (std::find(c.modifiers.begin(), c.modifiers.end(), pick) == c.modifiers.end())
      c.modifiers.push_back(pick);
  }
  c.speech_level_a = rng.pick(kb_.speech_levels()).label;
  c.speech_level_b = rng.pick(kb_.speech_levels()).label;
  return c;
}

ZodiacGenConfig ZodiacGenerator::sample_config(uint64_t seed) const {
  SplitMix64 rng(seed);
  for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
    ZodiacGenConfig c = sample_from(rng);
    const int net = net_age_gap(c);
    const AgeOrder order = resolve_age_order(kb_.lookup_speech_level(c.speech_level_a),
                                             kb_.lookup_speech_level(c.speech_level_b));
    const bool consistent = (net > 0 && order == AgeOrder::a_elder) ||
                            (net < 0 && order == AgeOrder::b_elder) ||
                            (net == 0 && order == AgeOrder::same_age);
    const int my_age = korean_age(c.birth_year, c.current_year);
    if (consistent && my_age + net >= 1) return c;
  }
  throw DomainError("no consistent premise set found for seed after " +
                    std::to_string(kMaxResamples) + " attempts");
}

QuestionInstance ZodiacGenerator::generate(uint64_t seed) const {
  return from_config(sample_config(seed), seed);
}

QuestionInstance ZodiacGenerator::from_config(const ZodiacGenConfig& config,
                                              uint64_t seed) const {
  const Relationship& rel = kb_.lookup_relationship(config.relationship);
  const SpeechLevel& level_a = kb_.lookup_speech_level(config.speech_level_a);
  const SpeechLevel& level_b = kb_.lookup_speech_level(config.speech_level_b);

  const int my_age = korean_age(config.birth_year, config.current_year);
  int modifier_total = 0;
  std::string modifier_list;
  for (const auto& m : config.modifiers) {
    modifier_total += kb_.lookup_modifier(m).age_delta;
    if (!modifier_list.empty()) modifier_list += "; ";
    modifier_list += m;
  }
  const int net = rel.year_gap + modifier_total;
  const AgeOrder order = resolve_age_order(level_a, level_b);

  const bool consistent = (net > 0 && order == AgeOrder::a_elder) ||
                          (net < 0 && order == AgeOrder::b_elder) ||
                          (net == 0 && order == AgeOrder::same_age);
  if (!consistent)
    throw DomainError("speech levels contradict the net age difference (" +
                      std::to_string(net) + ")");

  const int a_age = my_age + net;
  if (a_age < 1) throw DomainError("premises give A a non-positive age");
  const int a_birth_year = config.current_year - a_age + 1;
  const ZodiacSign sign = zodiac_of_year(a_birth_year);

  StepTrace trace;
  trace.steps.push_back({0, "timeline",
                         "The conversation takes place in " +
                             std::to_string(config.current_year) + "; my birth year is " +
                             std::to_string(config.birth_year) + ".",
                         std::string("current_year=") + std::to_string(config.current_year) +
                             " birth_year=" + std::to_string(config.birth_year)});

  trace.steps.push_back({1, "my_age",
                         "My Korean age is " + std::to_string(config.current_year) + " - " +
                             std::to_string(config.birth_year) + " + 1 = " +
                             std::to_string(my_age) + ".",
                         int64_t{my_age}});

  trace.steps.push_back({2, "relationship_gap",
                         "A is my " + rel.term + ", so the cohort age gap is " +
                             signed_years(rel.year_gap) + " years.",
                         int64_t{rel.year_gap}});

  if (!config.modifiers.empty()) {
    trace.steps.push_back({3, "modifier_total",
                           "A's entry-timing modifiers total " + signed_years(modifier_total) +
                               " years: " + modifier_list + ".",
                           int64_t{modifier_total}});
  }

  std::string order_text;
  switch (order) {
    case AgeOrder::a_elder: order_text = "The speech levels show A is older than me."; break;
    case AgeOrder::b_elder: order_text = "The speech levels show A is younger than me."; break;
    case AgeOrder::same_age:
      order_text = "The speech levels show A and I are the same age.";
      break;
  }
  int index = static_cast<int>(trace.steps.size());
  trace.steps.push_back({index++, "speech_order", order_text, std::string(to_string(order))});

  std::string a_age_arith = std::to_string(my_age) + " " +
                            (rel.year_gap >= 0 ? "+ " + std::to_string(rel.year_gap)
                                               : "- " + std::to_string(-rel.year_gap));
  if (!config.modifiers.empty()) {
    a_age_arith += modifier_total >= 0 ? " + " + std::to_string(modifier_total)
                                       : " - " + std::to_string(-modifier_total);
  }
  trace.steps.push_back({index++, "a_profile",
                         "A's Korean age is " + a_age_arith + " = " + std::to_string(a_age) +
                             ", so A's birth year is " + std::to_string(config.current_year) +
                             " - " + std::to_string(a_age) + " + 1 = " +
                             std::to_string(a_birth_year) + ".",
                         int64_t{a_birth_year}});

  trace.steps.push_back({index++, "zodiac",
                         "(" + std::to_string(a_birth_year) + " - 4) mod 12 = " +
                             std::to_string(sign.index) + ", so A's zodiac sign is " +
                             sign.name_ko + " (" + sign.name_en + ").",
                         sign});

  QuestionInstance q;
  q.subset = Subset::zodiac;
  q.seed = seed;
  q.generator_version = kGeneratorVersion;
  q.id = make_instance_id(q.subset, q.generator_version, seed);
  q.params = config.to_json();
  q.gold = std::move(trace);
  q.answer = sign;

  const std::string dialogue = compose_conversation(config);
  q.question_ko = "다음은 나와 A의 대화이다.\n" + dialogue + "\nA의 띠는 무엇인가?";
  q.question_en = "The following is a conversation between me (나) and A.\n" + dialogue +
                  "\nWhat is A's zodiac sign?";
  return q;
}

std::string ZodiacGenerator::compose_conversation(const ZodiacGenConfig& config) const {
  const Relationship& rel = kb_.lookup_relationship(config.relationship);
  const std::string& la = config.speech_level_a;
  const std::string& lb = config.speech_level_b;

  SplitMix64 rng(fnv1a64(config.to_json().dump()));
  const int target_lines = static_cast<int>(10 + rng.below(3));

  std::vector<std::pair<bool, std::string>> lines;  // (narrator?, text)
  lines.emplace_back(true, replace_all(greet().for_level(lb), "{year}",
                                       std::to_string(config.current_year)));
  lines.emplace_back(false, greet_back().for_level(la));
  lines.emplace_back(true, replace_all(my_birth().for_level(lb), "{year}",
                                       std::to_string(config.birth_year)));
  lines.emplace_back(false,
                     replace_all(relationship_line(rel.kind).for_level(la), "{term}", rel.term));
  lines.emplace_back(true, ack().for_level(lb));
  for (const auto& m : config.modifiers) {
    lines.emplace_back(false, replace_all(modifier_line().for_level(la), "{surface}", m));
  }

  auto pool = fillers();
  std::vector<size_t> unused(pool.size());
  for (size_t i = 0; i < unused.size(); ++i) unused[i] = i;
  const int filler_count = target_lines - static_cast<int>(lines.size()) - 2;
  bool narrator_turn = true;
  for (int i = 0; i < filler_count; ++i) {
    const size_t at = rng.below(unused.size());
    LineBank& bank = pool[unused[at]];
    // A pool entry can serve both speakers; retire it per dialogue.
    lines.emplace_back(narrator_turn, bank.for_level(narrator_turn ? lb : la));
    unused.erase(unused.begin() + static_cast<long>(at));
    narrator_turn = !narrator_turn;
  }

  lines.emplace_back(true, closing().for_level(lb));
  lines.emplace_back(false, closing_ack().for_level(la));

  std::string out;
  for (const auto& [is_narrator, text] : lines) {
    if (!out.empty()) out += '\n';
    out += (is_narrator ? "나: " : "A: ") + text;
  }
  return out;
}

}  // namespace kmr
