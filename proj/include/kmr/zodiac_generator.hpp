// Copyright 2026 The kmr Authors
// SPDX-License-Identifier: Apache-2.0
//
// Seeded generation of Zodiac questions: a 10-12 line Korean dialogue whose
// premises (current year, narrator's birth year, cohort relationship, entry
// timing modifiers, speech levels) pin down A's birth year, asked as A's
// zodiac sign. Gold traces have at most seven steps.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "kmr/knowledge.hpp"
#include "kmr/question.hpp"
#include "kmr/rng.hpp"

namespace kmr {

struct ZodiacGenConfig {
  int birth_year = 0;    // narrator
  int current_year = 0;
  std::string relationship;            // knowledge-base key
  std::vector<std::string> modifiers;  // knowledge-base keys, possibly empty
  std::string speech_level_a;          // how A speaks to the narrator
  std::string speech_level_b;          // how the narrator speaks to A

  nlohmann::ordered_json to_json() const;
  static ZodiacGenConfig from_json(const nlohmann::json& j);
};

class ZodiacGenerator {
 public:
  static constexpr int kMinYear = 1950;
  static constexpr int kMaxYear = 2030;
  static constexpr int kMinNarratorAge = 20;
  static constexpr int kMaxNarratorAge = 50;
  static constexpr int kMaxModifiers = 2;
  static constexpr int kMaxResamples = 64;

  explicit ZodiacGenerator(const Knowledge& kb) : kb_(kb) {}

  // Samples until the speech-level pair is consistent with the net age
  // difference (bounded retries, deterministic stream).
  ZodiacGenConfig sample_config(uint64_t seed) const;

  QuestionInstance generate(uint64_t seed) const;

  // Builds the instance for an explicit config; rejects inconsistent
  // premises instead of resampling.
  QuestionInstance from_config(const ZodiacGenConfig& config, uint64_t seed) const;

  // Pure in config: renders the 10-12 line dialogue. Length and filler
  // choice derive from a hash of the config's canonical form.
  std::string compose_conversation(const ZodiacGenConfig& config) const;

  // Net age difference (A minus narrator) implied by relationship + modifiers.
  int net_age_gap(const ZodiacGenConfig& config) const;

 private:
  ZodiacGenConfig sample_from(SplitMix64& rng) const;

  const Knowledge& kb_;
};

}  // namespace kmr
