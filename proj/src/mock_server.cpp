// Copyright 2026 The kmr Authors
// SPDX-License-Identifier: Apache-2.0

#include "kmr/mock_server.hpp"

#include <chrono>

#include <httplib.h>
#include <json.hpp>

#include "kmr/errors.hpp"
#include "kmr/judge.hpp"

namespace kmr {

namespace {

// Extracts the section between "### {name} : \n" and the next "\n\n### " (or
// end of text) from a judge user prompt.
std::string prompt_section(const std::string& text, const std::string& name) {
  const std::string marker = "### " + name + " : \n";
  const auto at = text.find(marker);
  if (at == std::string::npos) return "";
  const auto start = at + marker.size();
  const auto end = text.find("\n\n### ", start);
  return text.substr(start, end == std::string::npos ? std::string::npos : end - start);
}

std::string redacted_gold(const QuestionInstance& q, int fail_at) {
  std::string out;
  for (const auto& s : q.gold.steps) {
    if (!out.empty()) out += '\n';
    out += "STEP " + std::to_string(s.index) + ": ";
    out += s.index < fail_at ? s.text : "(세부 내용 생략)";
  }
  return out;
}

}  // namespace

MockServer::MockServer(BenchmarkRelease release) : release_(std::move(release)) {}

MockServer::~MockServer() { stop(); }

std::string MockServer::answer_for(const std::string& model, const std::string& content) {
  if (model == "judge-malformed") {
    return "I compared the response with the gold answer but forgot the verdict format.";
  }
  if (model == "judge-rule") {
    const std::string question = prompt_section(content, "Question");
    const std::string response = prompt_section(content, "Model Response");
    const QuestionInstance* q = release_.find_by_question(question);
    if (!q) throw MissingEntryError("judge prompt references an unknown question");
    const JudgeVerdict v = rule_grade(*q, response);
    return v.commentary + "\nCorrect: [[" + (v.correct ? "true" : "false") + "]] Step: [[" +
           std::to_string(v.failed_step) + "]]";
  }

  const QuestionInstance* q = release_.find_by_question(content);
  if (!q) throw MissingEntryError("question not found in the loaded release");

  if (model == "oracle") return gold_block(*q);

  constexpr const char* kFailPrefix = "fail-at-step:";
  if (model.rfind(kFailPrefix, 0) == 0) {
    const int fail_at = std::stoi(model.substr(std::string(kFailPrefix).size()));
    return redacted_gold(*q, fail_at);
  }
  throw MissingEntryError("unknown mock model id: " + model);
}

int MockServer::start(int port) {
  server_ = std::make_unique<httplib::Server>();

  server_->Post("/v1/chat/completions", [this](const httplib::Request& req,
                                               httplib::Response& res) {
    nlohmann::json body;
    try {
      body = nlohmann::json::parse(req.body);
      const std::string model = body.at("model").get<std::string>();
      std::string content;
      for (const auto& m : body.at("messages")) {
        if (m.at("role").get<std::string>() == "user")
          content = m.at("content").get<std::string>();
      }
      const std::string answer = answer_for(model, content);
      completions_served_.fetch_add(1);
      nlohmann::json out = {
          {"id", "mock-" + std::to_string(completions_served_.load())},
          {"object", "chat.completion"},
          {"model", model},
          {"choices",
           {{{"index", 0},
             {"message", {{"role", "assistant"}, {"content", answer}}},
             {"finish_reason", "stop"}}}},
          {"usage",
           {{"prompt_tokens", content.size() / 4},
            {"completion_tokens", answer.size() / 4},
            {"total_tokens", (content.size() + answer.size()) / 4}}}};
      res.set_content(out.dump(), "application/json");
    } catch (const std::exception& e) {
      res.status = 400;
      res.set_content(nlohmann::json({{"error", e.what()}}).dump(), "application/json");
    }
  });

  server_->Get("/health", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("ok", "text/plain");
  });

  if (port > 0) {
    if (!server_->bind_to_port("127.0.0.1", port))
      throw NetworkError("mock server could not bind port " + std::to_string(port));
    port_ = port;
  } else {
    port_ = server_->bind_to_any_port("127.0.0.1");
    if (port_ <= 0) throw NetworkError("mock server could not bind a port");
  }
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  while (!server_->is_running()) {
    std::this_thread::sleep_for(std::chrono::milliseconds(1));
  }
  return port_;
}

void MockServer::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace kmr
