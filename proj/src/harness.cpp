// Copyright 2026 The kmr Authors
// SPDX-License-Identifier: Apache-2.0

#include "kmr/harness.hpp"

#include <atomic>
#include <chrono>
#include <thread>

#include "kmr/errors.hpp"

namespace kmr {

namespace {

struct Task {
  const QuestionInstance* question;
  const ModelEndpoint* endpoint;
};

struct Counters {
  std::atomic<int> completed{0};
  std::atomic<int> failed{0};
  std::atomic<int> unparseable{0};
};

void grade(const QuestionInstance& q, const std::string& response, const HarnessOptions& options,
           RunRecord& record, Counters& counters) {
  if (options.use_rule_judge) {
    const JudgeVerdict v = rule_grade(q, response);
    record.judge_raw = v.raw;
    record.verdict = v;
    record.status = "ok";
    return;
  }

  const JudgePrompt prompt = build_judge_prompt(q, response);
  const std::vector<ChatMessage> messages = {{"system", prompt.system_text},
                                             {"user", prompt.user_text}};
  // One retry on malformed judge output, then the record is flagged.
  for (int judge_attempt = 0; judge_attempt < 2; ++judge_attempt) {
    const std::string raw = chat_complete(*options.judge, messages, options.chat);
    record.judge_raw = raw;
    try {
      record.verdict = parse_verdict(raw, static_cast<int>(q.gold.steps.size()));
      record.status = "ok";
      return;
    } catch (const MalformedVerdictError&) {
      if (judge_attempt == 1) {
        record.status = "unparseable";
        counters.unparseable.fetch_add(1);
      }
    }
  }
}

}  // namespace

HarnessSummary run_benchmark(const BenchmarkRelease& release,
                             const std::vector<ModelEndpoint>& endpoints,
                             const HarnessOptions& options, RunStore& store) {
  if (!options.use_rule_judge && !options.judge)
    throw DomainError("no judge endpoint configured and rule judge not requested");

  std::vector<Task> tasks;
  HarnessSummary summary;
  for (const auto* q : release.all()) {
    for (const auto& ep : endpoints) {
      ++summary.total;
      if (store.has(q->id, ep.name)) {
        ++summary.skipped;
      } else {
        tasks.push_back({q, &ep});
      }
    }
  }

  Counters counters;
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const Task& task = tasks[i];
      const QuestionInstance& q = *task.question;

      RunRecord record;
      record.question_id = q.id;
      record.model = task.endpoint->name;
      const auto started = std::chrono::steady_clock::now();

      try {
        const std::vector<ChatMessage> messages = {{"user", q.question_ko}};
        const ChatResult result = chat_complete_full(*task.endpoint, messages, options.chat);
        record.response = result.content;
        record.usage = result.usage;
        record.attempts = 1;
        grade(q, record.response, options, record, counters);
        if (record.status == "ok") counters.completed.fetch_add(1);
      } catch (const NetworkError& e) {
        record.status = "failed";
        record.judge_raw = "";
        record.response = record.response.empty() ? std::string("<no response: ") + e.what() + ">"
                                                  : record.response;
        record.attempts = options.chat.max_attempts;
        counters.failed.fetch_add(1);
      } catch (const std::exception& e) {
        // Anything else (bad endpoint payloads, judge-side surprises) must
        // not take the worker down.
        record.status = "failed";
        record.judge_raw = "";
        record.response += std::string("\n<error: ") + e.what() + ">";
        counters.failed.fetch_add(1);
      }

      record.latency_ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - started)
                              .count();
      store.append(std::move(record));
    }
  };

  const int n_threads = std::max(1, std::min<int>(options.concurrency,
                                                  static_cast<int>(tasks.size())));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(n_threads));
  for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  summary.completed = counters.completed.load();
  summary.failed = counters.failed.load();
  summary.unparseable = counters.unparseable.load();
  return summary;
}

}  // namespace kmr
