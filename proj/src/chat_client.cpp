// Copyright 2026 The kmr Authors
// SPDX-License-Identifier: Apache-2.0

#include "kmr/chat_client.hpp"

#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "kmr/errors.hpp"

namespace kmr {

ModelEndpoint parse_endpoint_spec(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos)
    throw ParseError("endpoint spec must be name=base_url|model_id[|API_KEY_ENV]: " + spec);
  ModelEndpoint ep;
  ep.name = spec.substr(0, eq);
  const std::string rest = spec.substr(eq + 1);
  const auto bar1 = rest.find('|');
  if (bar1 == std::string::npos)
    throw ParseError("endpoint spec missing model id: " + spec);
  ep.base_url = rest.substr(0, bar1);
  const auto bar2 = rest.find('|', bar1 + 1);
  if (bar2 == std::string::npos) {
    ep.model_id = rest.substr(bar1 + 1);
  } else {
    ep.model_id = rest.substr(bar1 + 1, bar2 - bar1 - 1);
    ep.api_key_env = rest.substr(bar2 + 1);
  }
  if (ep.name.empty() || ep.base_url.empty() || ep.model_id.empty())
    throw ParseError("endpoint spec has empty fields: " + spec);
  return ep;
}

ChatResult chat_complete_full(const ModelEndpoint& endpoint,
                              const std::vector<ChatMessage>& messages,
                              const ChatOptions& options) {
  nlohmann::json body;
  body["model"] = endpoint.model_id;
  body["messages"] = nlohmann::json::array();
  for (const auto& m : messages) {
    body["messages"].push_back({{"role", m.role}, {"content", m.content}});
  }
  body["temperature"] = endpoint.temperature;
  body["max_tokens"] = endpoint.max_tokens;
  const std::string payload = body.dump();

  httplib::Headers headers;
  if (!endpoint.api_key_env.empty()) {
    if (const char* token = std::getenv(endpoint.api_key_env.c_str()); token && *token) {
      headers.emplace("Authorization", std::string("Bearer ") + token);
    }
  }

  // httplib clients address scheme://host[:port]; any path component of the
  // base URL (gateway prefixes like /api) belongs on the request path.
  std::string host = endpoint.base_url;
  std::string path_prefix;
  const auto scheme_end = host.find("://");
  const auto path_start = host.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  if (path_start != std::string::npos) {
    path_prefix = host.substr(path_start);
    while (!path_prefix.empty() && path_prefix.back() == '/') path_prefix.pop_back();
    host = host.substr(0, path_start);
  }

  std::string last_error;
  for (int attempt = 0; attempt < options.max_attempts; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(
          std::chrono::milliseconds(options.backoff_ms * (1LL << (attempt - 1))));
    }
    httplib::Client client(host);
    client.set_connection_timeout(options.timeout_s);
    client.set_read_timeout(options.timeout_s);

    auto res =
        client.Post(path_prefix + "/v1/chat/completions", headers, payload, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) {
      last_error = "HTTP " + std::to_string(res->status) + ": " + res->body;
      continue;
    }
    try {
      const auto j = nlohmann::json::parse(res->body);
      ChatResult result;
      result.content = j.at("choices").at(0).at("message").at("content").get<std::string>();
      result.usage = j.value("usage", nlohmann::json());
      return result;
    } catch (const nlohmann::json::exception& e) {
      last_error = std::string("malformed completion body: ") + e.what();
    }
  }
  throw NetworkError(endpoint.name + " (" + endpoint.model_id + "): " + last_error);
}

std::string chat_complete(const ModelEndpoint& endpoint, const std::vector<ChatMessage>& messages,
                          const ChatOptions& options) {
  return chat_complete_full(endpoint, messages, options).content;
}

}  // namespace kmr
