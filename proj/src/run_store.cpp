// Copyright 2026 The kmr Authors
// SPDX-License-Identifier: Apache-2.0

#include "kmr/run_store.hpp"

#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "kmr/errors.hpp"
#include "kmr/version.hpp"

namespace kmr {

namespace {

nlohmann::ordered_json record_to_json(const RunRecord& r) {
  nlohmann::ordered_json j = {{"record", "result"},
                              {"run_id", r.run_id},
                              {"question_id", r.question_id},
                              {"model", r.model},
                              {"status", r.status},
                              {"response", r.response},
                              {"judge_raw", r.judge_raw},
                              {"usage", r.usage},
                              {"latency_ms", r.latency_ms},
                              {"attempts", r.attempts}};
  if (r.verdict) {
    j["verdict"] = {{"correct", r.verdict->correct},
                    {"failed_step", r.verdict->failed_step},
                    {"commentary", r.verdict->commentary}};
  } else {
    j["verdict"] = nullptr;
  }
  return j;
}

RunRecord record_from_json(const nlohmann::json& j) {
  RunRecord r;
  r.run_id = j.at("run_id").get<std::string>();
  r.question_id = j.at("question_id").get<std::string>();
  r.model = j.at("model").get<std::string>();
  r.status = j.at("status").get<std::string>();
  r.response = j.at("response").get<std::string>();
  r.judge_raw = j.value("judge_raw", "");
  r.usage = j.value("usage", nlohmann::json());
  r.latency_ms = j.value("latency_ms", 0.0);
  r.attempts = j.value("attempts", 1);
  if (j.contains("verdict") && !j.at("verdict").is_null()) {
    JudgeVerdict v;
    v.correct = j.at("verdict").at("correct").get<bool>();
    v.failed_step = j.at("verdict").at("failed_step").get<int>();
    v.commentary = j.at("verdict").value("commentary", "");
    v.raw = r.judge_raw;
    r.verdict = std::move(v);
  }
  return r;
}

}  // namespace

RunStore::RunStore(const std::string& path, const std::string& run_id,
                   const std::string& judge_label, const std::string& manifest_hash)
    : path_(path), run_id_(run_id) {
  if (std::filesystem::exists(path)) {
    std::ifstream in(path);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(line);
      } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("run store: ") + e.what(), line_no);
      }
      if (j.value("record", "") == "header") {
        const std::string stored = j.at("run_id").get<std::string>();
        if (stored != run_id)
          throw ParseError("run store belongs to run '" + stored + "', not '" + run_id + "'",
                           line_no);
        continue;
      }
      RunRecord r = record_from_json(j);
      index_[{r.question_id, r.model}] = records_.size();
      records_.push_back(std::move(r));
    }
    out_.open(path, std::ios::app | std::ios::binary);
  } else {
    out_.open(path, std::ios::binary);
    if (!out_) throw ParseError("cannot create run store: " + path);
    nlohmann::ordered_json header = {{"record", "header"},
                                     {"run_id", run_id},
                                     {"schema_version", kSchemaVersion},
                                     {"generator_version", kGeneratorVersion},
                                     {"judge", judge_label},
                                     {"manifest_hash", manifest_hash},
                                     {"created_at", utc_timestamp()}};
    out_ << header.dump() << "\n";
    out_.flush();
  }
  if (!out_) throw ParseError("cannot open run store for append: " + path);
}

bool RunStore::has(const std::string& question_id, const std::string& model) const {
  std::lock_guard<std::mutex> lock(mutex_);
  return index_.count({question_id, model}) != 0;
}

void RunStore::append(RunRecord record) {
  std::lock_guard<std::mutex> lock(mutex_);
  record.run_id = run_id_;
  out_ << record_to_json(record).dump() << "\n";
  out_.flush();
  index_[{record.question_id, record.model}] = records_.size();
  records_.push_back(std::move(record));
}

std::vector<RunRecord> RunStore::read_all(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open run store: " + path);
  std::vector<RunRecord> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("run store: ") + e.what(), line_no);
    }
    if (j.value("record", "") == "header") continue;
    out.push_back(record_from_json(j));
  }
  return out;
}

}  // namespace kmr
