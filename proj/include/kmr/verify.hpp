// Copyright 2026 The kmr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "kmr/calendar.hpp"
#include "kmr/knowledge.hpp"
#include "kmr/question.hpp"

namespace kmr {

struct VerifyReport {
  bool ok = false;
  int first_mismatch = -1;  // step index, -1 when consistent
  std::string detail;
  int steps_checked = 0;
};

// Re-derives every step value from the instance's params via the calendar
// and knowledge-base primitives and compares against the stored trace.
// Structural defects (gaps in indices, final/answer divergence, unknown
// labels) are reported with the offending step named.
VerifyReport verify_trace(const QuestionInstance& q, const LunisolarTable& table,
                          const Knowledge& kb);

}  // namespace kmr
