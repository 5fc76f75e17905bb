// Copyright 2026 The kmr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <vector>

#include "kmr/chat_client.hpp"
#include "kmr/question.hpp"
#include "kmr/run_store.hpp"

namespace kmr {

struct HarnessOptions {
  int concurrency = 4;
  ChatOptions chat;
  bool use_rule_judge = false;
  std::optional<ModelEndpoint> judge;  // required unless use_rule_judge
};

struct HarnessSummary {
  int total = 0;
  int completed = 0;  // graded this run
  int skipped = 0;    // already in the store
  int failed = 0;     // retries exhausted
  int unparseable = 0;
};

// Queries every (question, endpoint) pair not yet in the store, grades each
// response, and appends the record. Request failures mark the record failed
// and the run continues; results are keyed, so concurrency and ordering do
// not affect the outcome.
HarnessSummary run_benchmark(const BenchmarkRelease& release,
                             const std::vector<ModelEndpoint>& endpoints,
                             const HarnessOptions& options, RunStore& store);

}  // namespace kmr
