// Copyright 2026 The kmr Authors
// SPDX-License-Identifier: Apache-2.0
//
// Line-delimited run persistence. Records are keyed by
// (question_id, model); reopening an existing store resumes it, so a
// restarted run recomputes nothing already on disk.

#pragma once

#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kmr/judge.hpp"

namespace kmr {

struct RunRecord {
  std::string run_id;
  std::string question_id;
  std::string model;
  std::string status;  // "ok" | "failed" | "unparseable"
  std::string response;
  std::optional<JudgeVerdict> verdict;
  std::string judge_raw;  // raw judge text, kept even when unparseable
  nlohmann::json usage;   // endpoint-reported token usage, null when absent
  double latency_ms = 0.0;
  int attempts = 1;
};

class RunStore {
 public:
  // Creates the file with a header line, or resumes an existing one after
  // checking the run id matches.
  RunStore(const std::string& path, const std::string& run_id, const std::string& judge_label,
           const std::string& manifest_hash = "");

  bool has(const std::string& question_id, const std::string& model) const;
  void append(RunRecord record);  // thread-safe, flushed per record

  const std::string& run_id() const { return run_id_; }
  size_t size() const { return records_.size(); }
  const std::vector<RunRecord>& records() const { return records_; }

  static std::vector<RunRecord> read_all(const std::string& path);

 private:
  std::string path_;
  std::string run_id_;
  std::ofstream out_;
  std::vector<RunRecord> records_;
  std::map<std::pair<std::string, std::string>, size_t> index_;
  mutable std::mutex mutex_;
};

}  // namespace kmr
