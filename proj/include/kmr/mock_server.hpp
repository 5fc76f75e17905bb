// Copyright 2026 The kmr Authors
// SPDX-License-Identifier: Apache-2.0
//
// Scripted chat-completions endpoint so the whole harness is testable
// offline. Serves three model ids against a loaded release:
//   "oracle"          replies with the gold step block, verbatim
//   "fail-at-step:K"  gold steps below K, redacted from K on
//   "judge-rule"      grades a judge prompt with the rule judge and
//                       replies in the bracketed verdict format
//   "judge-malformed" replies without any verdict tokens

#pragma once

#include <atomic>
#include <memory>
#include <string>
#include <thread>

#include "kmr/question.hpp"

namespace httplib {
class Server;
}

namespace kmr {

class MockServer {
 public:
  explicit MockServer(BenchmarkRelease release);
  ~MockServer();

  MockServer(const MockServer&) = delete;
  MockServer& operator=(const MockServer&) = delete;

  // Binds 127.0.0.1 (ephemeral port when 0) and serves on a background
  // thread; returns the bound port.
  int start(int port = 0);
  void stop();

  int port() const { return port_; }
  std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port_); }
  int completions_served() const { return completions_served_.load(); }

 private:
  std::string answer_for(const std::string& model, const std::string& content);

  BenchmarkRelease release_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> completions_served_{0};
};

}  // namespace kmr
