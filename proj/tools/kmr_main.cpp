// Copyright 2026 The kmr Authors
// SPDX-License-Identifier: Apache-2.0
//
// kmr: generate, verify, evaluate, score, and analyze Korean multi-step
// reasoning benchmark releases. Pipeline of files: every stage consumes the
// previous stage's output and can be re-run independently.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <thread>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kmr/analysis.hpp"
#include "kmr/calendar.hpp"
#include "kmr/chat_client.hpp"
#include "kmr/date_generator.hpp"
#include "kmr/errors.hpp"
#include "kmr/harness.hpp"
#include "kmr/judge.hpp"
#include "kmr/knowledge.hpp"
#include "kmr/mock_server.hpp"
#include "kmr/question.hpp"
#include "kmr/rng.hpp"
#include "kmr/run_store.hpp"
#include "kmr/scoring.hpp"
#include "kmr/verify.hpp"
#include "kmr/version.hpp"
#include "kmr/zodiac_generator.hpp"

namespace {

constexpr int kExitVerification = 2;
constexpr int kExitNetwork = 3;
constexpr int kExitParse = 4;

// Persist the invocation beside its outputs; the hash covers everything
// except the timestamp, so reruns with equal flags carry equal hashes.
std::string write_manifest(const std::string& out_path, const std::string& command,
                           const std::map<std::string, std::string>& args,
                           const std::map<std::string, std::string>& unhashed_args = {}) {
  nlohmann::ordered_json manifest = {{"command", command},
                                     {"args", args},
                                     {"generator_version", kmr::kGeneratorVersion},
                                     {"schema_version", kmr::kSchemaVersion},
                                     {"rng", kmr::kRngName}};
  const std::string hash = kmr::to_hex(kmr::fnv1a64(manifest.dump()));
  for (const auto& [key, value] : unhashed_args) manifest["args"][key] = value;
  manifest["manifest_hash"] = hash;
  manifest["created_at"] = kmr::utc_timestamp();
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw kmr::ParseError("cannot write manifest: " + out_path);
  out << manifest.dump(2) << "\n";
  return hash;
}

struct GenerateArgs {
  std::string subset = "both";
  int count = 50;
  uint64_t seed_start = 0;
  std::string out;
  std::string release_id;
};

int cmd_generate(const GenerateArgs& args) {
  const kmr::LunisolarTable table = kmr::load_default_table();
  const kmr::Knowledge kb = kmr::Knowledge::load_default();
  const kmr::DateGenerator date_gen(kb, table);
  const kmr::ZodiacGenerator zodiac_gen(kb);

  kmr::BenchmarkRelease release;
  release.generator_version = kmr::kGeneratorVersion;
  release.created_at = kmr::utc_timestamp();
  release.release_id = !args.release_id.empty()
                           ? args.release_id
                           : "rel-" + std::string(kmr::kGeneratorVersion) + "-s" +
                                 std::to_string(args.seed_start) + "-n" +
                                 std::to_string(args.count);

  const bool want_date = args.subset == "date" || args.subset == "both";
  const bool want_zodiac = args.subset == "zodiac" || args.subset == "both";
  for (int i = 0; i < args.count; ++i) {
    const uint64_t seed = args.seed_start + static_cast<uint64_t>(i);
    if (want_date) release.date_instances.push_back(date_gen.generate(seed));
    if (want_zodiac) release.zodiac_instances.push_back(zodiac_gen.generate(seed));
  }

  int verified = 0, failed = 0;
  for (const auto* q : release.all()) {
    const kmr::VerifyReport report = kmr::verify_trace(*q, table, kb);
    if (report.ok) {
      ++verified;
    } else {
      ++failed;
      std::cerr << q->id << ": " << report.detail << "\n";
    }
  }
  const int total = verified + failed;
  std::cout << "generated " << total << " instances (" << release.date_instances.size()
            << " date, " << release.zodiac_instances.size() << " zodiac); verified " << verified
            << "/" << total << "\n";
  if (failed > 0) return kExitVerification;

  // The output path stays out of the hash so regeneration to any path is
  // byte-comparable.
  release.manifest_hash = write_manifest(
      args.out + ".manifest.json", "generate",
      {{"subset", args.subset},
       {"count", std::to_string(args.count)},
       {"seed_start", std::to_string(args.seed_start)},
       {"release_id", release.release_id}},
      {{"out", args.out}});
  kmr::write_release(args.out, release);
  std::cout << "wrote " << args.out << " (release " << release.release_id << ")\n";
  return 0;
}

int cmd_verify(const std::string& release_path) {
  const kmr::LunisolarTable table = kmr::load_default_table();
  const kmr::Knowledge kb = kmr::Knowledge::load_default();
  const kmr::BenchmarkRelease release = kmr::read_release(release_path);

  int failed = 0;
  for (const kmr::Subset subset : {kmr::Subset::date, kmr::Subset::zodiac}) {
    const auto& list =
        subset == kmr::Subset::date ? release.date_instances : release.zodiac_instances;
    int ok = 0;
    for (const auto& q : list) {
      const kmr::VerifyReport report = kmr::verify_trace(q, table, kb);
      if (report.ok) {
        ++ok;
      } else {
        ++failed;
        std::cerr << q.id << ": step " << report.first_mismatch << ": " << report.detail << "\n";
      }
    }
    std::cout << kmr::to_string(subset) << ": " << ok << "/" << list.size() << " verified\n";
  }
  return failed == 0 ? 0 : kExitVerification;
}

struct EvalArgs {
  std::string release;
  std::vector<std::string> endpoints;
  std::string judge = "rule";
  bool mock = false;
  std::string run_id = "run";
  std::string out;
  int concurrency = 4;
  int max_attempts = 3;
  int backoff_ms = 250;
};

int cmd_eval(const EvalArgs& args) {
  const kmr::BenchmarkRelease release = kmr::read_release(args.release);

  std::unique_ptr<kmr::MockServer> mock;
  std::string mock_url;
  if (args.mock) {
    mock = std::make_unique<kmr::MockServer>(release);
    mock->start();
    mock_url = mock->base_url();
    std::cout << "mock endpoint at " << mock_url << "\n";
  }

  std::vector<kmr::ModelEndpoint> endpoints;
  for (const auto& spec : args.endpoints) {
    if (spec.find('=') == std::string::npos) {
      if (!args.mock)
        throw kmr::ParseError("bare endpoint '" + spec + "' is only valid with --mock");
      endpoints.push_back({spec, mock_url, spec, "", 0.0, 2048});
    } else {
      endpoints.push_back(kmr::parse_endpoint_spec(spec));
    }
  }
  if (endpoints.empty()) throw kmr::ParseError("no --endpoint given");

  kmr::HarnessOptions options;
  options.concurrency = args.concurrency;
  options.chat.max_attempts = args.max_attempts;
  options.chat.backoff_ms = args.backoff_ms;
  std::string judge_label;
  if (args.judge == "rule") {
    options.use_rule_judge = true;
    judge_label = "rule";
  } else if (args.judge == "mock") {
    if (!args.mock) throw kmr::ParseError("--judge mock requires --mock");
    options.judge = kmr::ModelEndpoint{"judge", mock_url, "judge-rule", "", 0.0, 2048};
    judge_label = "judge-rule@mock";
  } else {
    options.judge = kmr::parse_endpoint_spec(args.judge);
    judge_label = options.judge->name + ":" + options.judge->model_id;
  }

  const std::string manifest_hash =
      write_manifest(args.out + ".manifest.json", "eval",
                     {{"release", args.release},
                      {"run_id", args.run_id},
                      {"judge", judge_label},
                      {"endpoints", std::to_string(endpoints.size())}},
                     {{"out", args.out}});
  kmr::RunStore store(args.out, args.run_id, judge_label, manifest_hash);
  const kmr::HarnessSummary summary = run_benchmark(release, endpoints, options, store);
  std::cout << "total " << summary.total << ", completed " << summary.completed << ", skipped "
            << summary.skipped << ", failed " << summary.failed << ", unparseable "
            << summary.unparseable << "\n";
  return summary.failed > 0 ? kExitNetwork : 0;
}

struct ScoreArgs {
  std::string run;
  std::string release;
  std::string out;
};

int cmd_score(const ScoreArgs& args) {
  const kmr::BenchmarkRelease release = kmr::read_release(args.release);
  const auto records = kmr::RunStore::read_all(args.run);
  const kmr::ScoredRun scored = kmr::score_run(records, release);

  std::filesystem::create_directories(args.out);
  const std::string hash = write_manifest(args.out + "/manifest.json", "score",
                                          {{"run", args.run},
                                           {"release", args.release},
                                           {"out", args.out}});
  const std::string extra =
      "generator=" + std::string(kmr::kGeneratorVersion) + " manifest=" + hash;
  scored.date.to_csv(args.out + "/steps_date.csv", extra);
  scored.zodiac.to_csv(args.out + "/steps_zodiac.csv", extra);
  const auto finals = kmr::final_scores(scored.date, scored.zodiac);
  kmr::write_final_scores_csv(args.out + "/scores.csv", finals, extra);

  std::cout << "model,date,zodiac,average\n";
  for (const auto& s : finals) {
    std::cout << s.model << "," << s.date << "," << s.zodiac << "," << s.average << "\n";
  }
  if (scored.dropped_records > 0) {
    std::cout << "note: " << scored.dropped_records
              << " records had no verdict and scored as step-0 failures\n";
  }
  return 0;
}

struct AnalyzeArgs {
  std::string steps_date;
  std::string steps_zodiac;
  std::string metadata;
  std::string out;
};

int cmd_analyze(const AnalyzeArgs& args) {
  const kmr::StepAccuracyTable date = kmr::StepAccuracyTable::from_csv(args.steps_date);
  const kmr::StepAccuracyTable zodiac = kmr::StepAccuracyTable::from_csv(args.steps_zodiac);
  const auto metadata = kmr::read_model_metadata(args.metadata);
  const kmr::EmergenceAnalysis analysis = kmr::analyze_emergence(date, zodiac, metadata);

  std::filesystem::create_directories(args.out);
  const std::string hash = write_manifest(args.out + "/manifest.json", "analyze",
                                          {{"steps_date", args.steps_date},
                                           {"steps_zodiac", args.steps_zodiac},
                                           {"metadata", args.metadata},
                                           {"out", args.out}});
  const std::string extra =
      "generator=" + std::string(kmr::kGeneratorVersion) + " manifest=" + hash;
  kmr::write_regression_csv(args.out + "/regression_date.csv", analysis.date, extra);
  kmr::write_regression_csv(args.out + "/regression_zodiac.csv", analysis.zodiac, extra);
  kmr::write_emergence_csv(args.out + "/emergence.csv", analysis, extra);
  kmr::write_plot_data(args.out, date, analysis, extra);
  kmr::write_plot_data(args.out, zodiac, analysis, extra);

  auto join = [](const std::vector<std::string>& items) {
    std::string out;
    for (const auto& s : items) {
      if (!out.empty()) out += ", ";
      out += s;
    }
    return out;
  };
  std::cout << "top five by final average: " << join(analysis.top5) << "\n";
  std::cout << "fit set (" << analysis.fit_models.size() << "): " << join(analysis.fit_models)
            << "\n";
  std::cout << "held out with compute metadata (" << analysis.holdout_models.size()
            << "): " << join(analysis.holdout_models) << "\n";
  for (const kmr::SubsetRegression* reg : {&analysis.date, &analysis.zodiac}) {
    std::cout << kmr::to_string(reg->subset) << ": mean |held-out residual| per step =";
    for (const auto& sf : reg->steps) {
      std::cout << " " << (sf.is_final ? "final:" : "s" + std::to_string(sf.column) + ":")
                << sf.holdout_mean_abs;
    }
    std::cout << " -> final " << (reg->final_dominant ? "dominates" : "does not dominate")
              << "\n";
  }
  return 0;
}

int cmd_mock_serve(const std::string& release_path, int port) {
  const kmr::BenchmarkRelease release = kmr::read_release(release_path);
  kmr::MockServer server(release);
  const int bound = server.start(port);
  std::cout << "serving " << release.release_id << " at http://127.0.0.1:" << bound
            << "/v1/chat/completions (models: oracle, fail-at-step:K, judge-rule)\n";
  std::cout << "press Ctrl-C to stop\n";
  for (;;) std::this_thread::sleep_for(std::chrono::seconds(3600));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Korean multi-step reasoning benchmark toolkit"};
  app.set_version_flag("--version", std::string("kmr ") + kmr::kGeneratorVersion);
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Generate a seeded benchmark release");
  generate->add_option("--subset", gen.subset, "date, zodiac, or both")
      ->check(CLI::IsMember({"date", "zodiac", "both"}));
  generate->add_option("--count", gen.count, "instances per subset")->check(CLI::NonNegativeNumber);
  generate->add_option("--seed-start", gen.seed_start, "first seed");
  generate->add_option("--out", gen.out, "release file to write")->required();
  generate->add_option("--release-id", gen.release_id, "explicit release id");

  std::string verify_release;
  auto* verify = app.add_subcommand("verify", "Re-derive and check every gold trace");
  verify->add_option("--release", verify_release, "release file")->required();

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Query endpoints and grade responses");
  eval_cmd->add_option("--release", eval.release, "release file")->required();
  eval_cmd->add_option("--endpoint", eval.endpoints,
                       "name=base_url|model[|KEY_ENV]; bare model id with --mock");
  eval_cmd->add_option("--judge", eval.judge, "'rule', 'mock', or name=base_url|model[|KEY_ENV]");
  eval_cmd->add_flag("--mock", eval.mock, "serve the release from an in-process mock endpoint");
  eval_cmd->add_option("--run-id", eval.run_id, "run id (resume key)");
  eval_cmd->add_option("--out", eval.out, "run store to write/resume")->required();
  eval_cmd->add_option("--concurrency", eval.concurrency, "in-flight requests");
  eval_cmd->add_option("--max-attempts", eval.max_attempts, "HTTP attempts per request");
  eval_cmd->add_option("--backoff-ms", eval.backoff_ms, "base retry backoff");

  ScoreArgs score;
  auto* score_cmd = app.add_subcommand("score", "Aggregate a run store into score tables");
  score_cmd->add_option("--run", score.run, "run store file")->required();
  score_cmd->add_option("--release", score.release, "release file")->required();
  score_cmd->add_option("--out", score.out, "output directory")->required();

  AnalyzeArgs analyze;
  auto* analyze_cmd =
      app.add_subcommand("analyze", "Per-step regression against training compute");
  analyze_cmd->add_option("--steps-date", analyze.steps_date, "date step table csv")->required();
  analyze_cmd->add_option("--steps-zodiac", analyze.steps_zodiac, "zodiac step table csv")
      ->required();
  analyze_cmd->add_option("--metadata", analyze.metadata, "model metadata csv")->required();
  analyze_cmd->add_option("--out", analyze.out, "output directory")->required();

  std::string serve_release;
  int serve_port = 0;
  auto* serve = app.add_subcommand("mock-serve", "Run the scripted mock endpoint standalone");
  serve->add_option("--release", serve_release, "release file")->required();
  serve->add_option("--port", serve_port, "port (0 = ephemeral)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*generate) return cmd_generate(gen);
    if (*verify) return cmd_verify(verify_release);
    if (*eval_cmd) return cmd_eval(eval);
    if (*score_cmd) return cmd_score(score);
    if (*analyze_cmd) return cmd_analyze(analyze);
    if (*serve) return cmd_mock_serve(serve_release, serve_port);
  } catch (const kmr::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const kmr::NetworkError& e) {
    std::cerr << "network error: " << e.what() << "\n";
    return kExitNetwork;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
