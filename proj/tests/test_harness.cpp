// Copyright 2026 The kmr Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "kmr/date_generator.hpp"
#include "kmr/errors.hpp"
#include "kmr/harness.hpp"
#include "kmr/mock_server.hpp"
#include "kmr/question.hpp"
#include "kmr/run_store.hpp"
#include "kmr/scoring.hpp"
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

BenchmarkRelease build_release(int per_subset) {
  BenchmarkRelease release;
  release.release_id = "harness-test";
  release.generator_version = kGeneratorVersion;
  release.created_at = "2026-01-01T00:00:00Z";
  const DateGenerator dg(kb(), table());
  const ZodiacGenerator zg(kb());
  for (int i = 0; i < per_subset; ++i) {
    release.date_instances.push_back(dg.generate(static_cast<uint64_t>(i)));
    release.zodiac_instances.push_back(zg.generate(static_cast<uint64_t>(i)));
  }
  return release;
}

std::string temp_store_path(const std::string& tag) {
  const auto path = std::filesystem::temp_directory_path() / ("kmr_" + tag + ".jsonl");
  std::filesystem::remove(path);
  return path.string();
}

ModelEndpoint mock_endpoint(const MockServer& server, const std::string& model) {
  return {model, server.base_url(), model, "", 0.0, 2048};
}

}  // namespace

TEST_CASE("endpoint specs parse") {
  const ModelEndpoint ep = parse_endpoint_spec("gpt=https://example.com|gpt-4o|MY_KEY");
  CHECK(ep.name == "gpt");
  CHECK(ep.base_url == "https://example.com");
  CHECK(ep.model_id == "gpt-4o");
  CHECK(ep.api_key_env == "MY_KEY");
  CHECK(parse_endpoint_spec("m=http://h:1|x").api_key_env.empty());
  CHECK_THROWS_AS(parse_endpoint_spec("nonsense"), ParseError);
  CHECK_THROWS_AS(parse_endpoint_spec("name=nourl"), ParseError);
}

TEST_CASE("oracle mock scores perfectly under both judges") {
  const BenchmarkRelease release = build_release(6);
  MockServer server(release);
  server.start();

  for (const bool rule : {true, false}) {
    HarnessOptions options;
    options.concurrency = 4;
    options.use_rule_judge = rule;
    if (!rule) options.judge = mock_endpoint(server, "judge-rule");

    RunStore store(temp_store_path(rule ? "oracle_rule" : "oracle_llm"), "r1",
                   rule ? "rule" : "mock-judge");
    const HarnessSummary summary =
        run_benchmark(release, {mock_endpoint(server, "oracle")}, options, store);
    CHECK(summary.total == 12);
    CHECK(summary.completed == 12);
    CHECK(summary.failed == 0);

    for (const auto& r : store.records()) {
      REQUIRE(r.verdict.has_value());
      CHECK(r.verdict->correct);
      CHECK(r.verdict->failed_step == -1);
      CHECK(r.usage.contains("total_tokens"));
    }
  }
  server.stop();
}

TEST_CASE("fail-at-step-2 mock is attributed (false, 2) everywhere") {
  const BenchmarkRelease release = build_release(8);
  MockServer server(release);
  server.start();

  HarnessOptions options;
  options.use_rule_judge = true;
  RunStore store(temp_store_path("failstep"), "r2", "rule");
  const HarnessSummary summary =
      run_benchmark(release, {mock_endpoint(server, "fail-at-step:2")}, options, store);
  CHECK(summary.completed == 16);
  for (const auto& r : store.records()) {
    REQUIRE(r.verdict.has_value());
    CHECK_FALSE(r.verdict->correct);
    CHECK(r.verdict->failed_step == 2);
  }
  server.stop();
}

TEST_CASE("resuming a run store recomputes nothing") {
  const BenchmarkRelease release = build_release(5);
  MockServer server(release);
  server.start();

  HarnessOptions options;
  options.use_rule_judge = true;
  const std::string path = temp_store_path("resume");
  {
    RunStore store(path, "resume-run", "rule");
    run_benchmark(release, {mock_endpoint(server, "oracle")}, options, store);
    CHECK(store.size() == 10);
  }
  const int served_after_first = server.completions_served();

  {
    RunStore store(path, "resume-run", "rule");
    const HarnessSummary summary =
        run_benchmark(release, {mock_endpoint(server, "oracle")}, options, store);
    CHECK(summary.skipped == 10);
    CHECK(summary.completed == 0);
    CHECK(store.size() == 10);
  }
  CHECK(server.completions_served() == served_after_first);

  CHECK_THROWS_AS(RunStore(path, "some-other-run", "rule"), ParseError);
  server.stop();
}

TEST_CASE("run output is independent of concurrency") {
  const BenchmarkRelease release = build_release(6);
  MockServer server(release);
  server.start();

  auto run_with = [&](int concurrency, const std::string& tag) {
    HarnessOptions options;
    options.use_rule_judge = true;
    options.concurrency = concurrency;
    RunStore store(temp_store_path(tag), "rc", "rule");
    run_benchmark(release, {mock_endpoint(server, "oracle"),
                            mock_endpoint(server, "fail-at-step:3")},
                  options, store);
    std::map<std::pair<std::string, std::string>, std::pair<bool, int>> keyed;
    for (const auto& r : store.records()) {
      keyed[{r.question_id, r.model}] = {r.verdict->correct, r.verdict->failed_step};
    }
    return keyed;
  };
  CHECK(run_with(1, "c1") == run_with(8, "c8"));
  server.stop();
}

TEST_CASE("unreachable endpoints mark records failed and the run continues") {
  const BenchmarkRelease release = build_release(2);
  MockServer server(release);
  server.start();

  HarnessOptions options;
  options.use_rule_judge = true;
  options.chat.max_attempts = 2;
  options.chat.backoff_ms = 1;

  ModelEndpoint dead{"dead", "http://127.0.0.1:1", "oracle", "", 0.0, 256};
  RunStore store(temp_store_path("dead"), "r3", "rule");
  const HarnessSummary summary =
      run_benchmark(release, {dead, mock_endpoint(server, "oracle")}, options, store);
  CHECK(summary.failed == 4);
  CHECK(summary.completed == 4);

  int failed_records = 0;
  for (const auto& r : store.records()) {
    if (r.status == "failed") {
      ++failed_records;
      CHECK_FALSE(r.verdict.has_value());
      CHECK(r.model == "dead");
    }
  }
  CHECK(failed_records == 4);
  server.stop();
}

TEST_CASE("scoring an oracle + scripted-failure run") {
  const BenchmarkRelease release = build_release(10);
  MockServer server(release);
  server.start();

  HarnessOptions options;
  options.use_rule_judge = true;
  RunStore store(temp_store_path("scored"), "r4", "rule");
  run_benchmark(release, {mock_endpoint(server, "oracle"),
                          mock_endpoint(server, "fail-at-step:2")},
                options, store);
  server.stop();

  const ScoredRun scored = score_run(store.records(), release);
  CHECK(cumulative_monotone(scored.date));
  CHECK(cumulative_monotone(scored.zodiac));

  for (const StepAccuracyTable* t : {&scored.date, &scored.zodiac}) {
    const auto& oracle_row = t->rates.at("oracle");
    for (const double v : oracle_row) CHECK(v == 100.0);
    const auto& fail_row = t->rates.at("fail-at-step:2");
    CHECK(fail_row[0] == 100.0);
    CHECK(fail_row[1] == 100.0);
    for (size_t k = 2; k < fail_row.size(); ++k) CHECK(fail_row[k] == 0.0);
  }
  server.stop();
}

TEST_CASE("a judge that never emits a verdict flags records unparseable") {
  const BenchmarkRelease release = build_release(3);
  MockServer server(release);
  server.start();

  HarnessOptions options;
  options.judge = mock_endpoint(server, "judge-malformed");
  RunStore store(temp_store_path("unparseable"), "r5", "mock-judge");
  const HarnessSummary summary =
      run_benchmark(release, {mock_endpoint(server, "oracle")}, options, store);
  CHECK(summary.unparseable == 6);
  CHECK(summary.failed == 0);
  for (const auto& r : store.records()) {
    CHECK(r.status == "unparseable");
    CHECK_FALSE(r.verdict.has_value());
    CHECK(r.judge_raw.find("forgot the verdict format") != std::string::npos);
  }

  // Unparseable records score as step-0 failures.
  const ScoredRun scored = score_run(store.records(), release);
  CHECK(scored.dropped_records == 6);
  for (const double v : scored.date.rates.at("oracle")) CHECK(v == 0.0);
  server.stop();
}

TEST_CASE("base URLs with a path prefix reach the completions route") {
  const BenchmarkRelease release = build_release(1);
  MockServer server(release);
  server.start();

  // Trailing slash must not produce "//v1/..." paths.
  ModelEndpoint ep{"oracle", server.base_url() + "/", "oracle", "", 0.0, 2048};
  const std::string content =
      chat_complete(ep, {{"user", release.date_instances[0].question_ko}}, {});
  CHECK(content == gold_block(release.date_instances[0]));
  server.stop();
}
