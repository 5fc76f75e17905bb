// Copyright 2026 The kmr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

namespace kmr {

// True when the last character is a Hangul syllable with a final consonant
// (batchim); drives particle/copula selection.
bool ends_with_batchim(const std::string& utf8);

// 이/가 subject particle for the given word.
std::string subject_particle(const std::string& word);

std::string replace_all(std::string text, const std::string& from, const std::string& to);

}  // namespace kmr
