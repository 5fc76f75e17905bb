// Copyright 2026 The kmr Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace kmr {

struct ModelEndpoint {
  std::string name;         // label used in run records
  std::string base_url;     // e.g. "https://openrouter.ai/api" or the mock server
  std::string model_id;     // wire "model" field
  std::string api_key_env;  // env var holding the bearer token; never persisted
  double temperature = 0.0;  // greedy by contract
  int max_tokens = 2048;
};

// "name=base_url|model_id[|API_KEY_ENV]"
ModelEndpoint parse_endpoint_spec(const std::string& spec);

struct ChatMessage {
  std::string role;
  std::string content;
};

struct ChatOptions {
  int max_attempts = 3;
  int backoff_ms = 250;  // doubled per attempt
  int timeout_s = 120;
};

struct ChatResult {
  std::string content;
  nlohmann::json usage;  // endpoint-reported token usage, null when absent
};

// POSTs an OpenAI-compatible chat completion and returns the first choice's
// content plus reported usage. Retries with exponential backoff; throws
// NetworkError once attempts are exhausted.
ChatResult chat_complete_full(const ModelEndpoint& endpoint,
                              const std::vector<ChatMessage>& messages,
                              const ChatOptions& options = {});

std::string chat_complete(const ModelEndpoint& endpoint, const std::vector<ChatMessage>& messages,
                          const ChatOptions& options = {});

}  // namespace kmr
