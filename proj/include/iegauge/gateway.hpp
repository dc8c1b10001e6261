// Copyright 2026 The IEGauge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Chat-completion gateway: one stateless request per prompt, an append-only
// JSONL response cache, retry with exponential backoff on rate limiting and
// bounded-concurrency batches.

#ifndef IEGAUGE_GATEWAY_HPP_
#define IEGAUGE_GATEWAY_HPP_

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "iegauge/json_io.hpp"

namespace iegauge {

// Lowercase hex SHA-256.
inline std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

struct CompletionRequest {
  std::string model_name;
  std::string prompt;
  double temperature = 0.0;
  int max_tokens = 512;

  std::string request_key() const {
    return sha256_hex(Json::array({model_name, prompt, temperature}).dump());
  }
};

struct CompletionRecord {
  std::string request_key;
  std::string response_text;
  double latency_ms = 0.0;
  std::string timestamp;
  int attempt_count = 0;
  bool truncated = false;  // provider stopped at max_tokens

  bool operator==(const CompletionRecord&) const = default;
};

inline Json to_json(const CompletionRecord& r) {
  return Json{{"request_key", r.request_key},   {"response_text", r.response_text},
              {"latency_ms", r.latency_ms},     {"timestamp", r.timestamp},
              {"attempt_count", r.attempt_count}, {"truncated", r.truncated}};
}

inline CompletionRecord record_from_json(const Json& j) {
  CompletionRecord r;
  r.request_key = j.at("request_key").get<std::string>();
  r.response_text = j.at("response_text").get<std::string>();
  r.latency_ms = j.value("latency_ms", 0.0);
  r.timestamp = j.value("timestamp", std::string());
  r.attempt_count = j.value("attempt_count", 1);
  r.truncated = j.value("truncated", false);
  return r;
}

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// ---------------------------------------------------------------------------
// Errors

class GatewayError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AuthError : public GatewayError {
 public:
  using GatewayError::GatewayError;
};

class RateLimited : public GatewayError {
 public:
  using GatewayError::GatewayError;
};

class TransportError : public GatewayError {
 public:
  using GatewayError::GatewayError;
};

// ---------------------------------------------------------------------------
// Cache

// Append-only JSONL log of CompletionRecords. The first record per key wins.
class ResponseCache {
 public:
  ResponseCache() = default;  // in-memory only
  explicit ResponseCache(std::filesystem::path path) : path_(std::move(path)) {
    std::ifstream in(path_);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      CompletionRecord r;
      try {
        r = record_from_json(Json::parse(line));
      } catch (const std::exception& e) {
        throw FormatError(path_.string() + ":" + std::to_string(line_no) + ": " + e.what());
      }
      records_.emplace(r.request_key, std::move(r));
    }
  }

  std::optional<CompletionRecord> find(const std::string& key) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = records_.find(key);
    if (it == records_.end()) return std::nullopt;
    return it->second;
  }

  void append(const CompletionRecord& r) {
    std::lock_guard<std::mutex> lock(mu_);
    if (!records_.emplace(r.request_key, r).second) return;
    if (path_.empty()) return;
    if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
    std::ofstream out(path_, std::ios::app);
    out << to_json(r).dump() << '\n';
    if (!out) throw std::runtime_error("cannot append to cache " + path_.string());
  }

  void purge() {
    std::lock_guard<std::mutex> lock(mu_);
    records_.clear();
    if (!path_.empty()) std::filesystem::remove(path_);
  }

  std::size_t size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return records_.size();
  }

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  mutable std::mutex mu_;
  std::unordered_map<std::string, CompletionRecord> records_;
};

// ---------------------------------------------------------------------------
// Transport

struct HttpReply {
  int status = 0;  // 0: no HTTP exchange happened
  std::string body;
  std::string error;
};

class ChatTransport {
 public:
  virtual ~ChatTransport() = default;
  virtual bool has_credentials() const { return true; }
  // POSTs a chat-completions body. Must be safe to call concurrently.
  virtual HttpReply post(const std::string& json_body) = 0;
};

// OpenAI-compatible request body: a single user message, no history.
inline Json chat_body(const CompletionRequest& r) {
  return Json{{"model", r.model_name},
              {"messages", Json::array({Json{{"role", "user"}, {"content", r.prompt}}})},
              {"temperature", r.temperature},
              {"max_tokens", r.max_tokens}};
}

struct ChatReply {
  std::string text;
  bool truncated = false;
};

inline ChatReply parse_chat_reply(const std::string& body) {
  try {
    const Json j = Json::parse(body);
    const Json& choice = j.at("choices").at(0);
    ChatReply r;
    const Json& content = choice.at("message").at("content");
    r.text = content.is_null() ? std::string() : content.get<std::string>();
    r.truncated = choice.value("finish_reason", std::string()) == "length";
    return r;
  } catch (const std::exception& e) {
    throw TransportError(std::string("malformed chat reply: ") + e.what());
  }
}

struct RetryPolicy {
  int max_attempts = 6;
  std::chrono::milliseconds initial_backoff{1000};
  double factor = 2.0;
  std::chrono::milliseconds max_backoff{60000};
};

class Gateway {
 public:
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  Gateway(std::shared_ptr<ChatTransport> transport, std::shared_ptr<ResponseCache> cache,
          RetryPolicy retry = {})
      : transport_(std::move(transport)),
        cache_(cache ? std::move(cache) : std::make_shared<ResponseCache>()),
        retry_(retry),
        sleep_([](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); }) {}

  void set_sleeper(Sleeper s) { sleep_ = std::move(s); }

  // Cache hit: no network call. Only HTTP 429 is retried.
  CompletionRecord complete(const CompletionRequest& r) {
    const std::string key = r.request_key();
    if (auto hit = cache_->find(key)) return *hit;
    if (!transport_ || !transport_->has_credentials()) {
      throw AuthError("no API credentials configured and no cached response for " + key.substr(0, 12));
    }
    const std::string body = chat_body(r).dump();
    auto backoff = retry_.initial_backoff;
    const auto start = std::chrono::steady_clock::now();
    for (int attempt = 1;; ++attempt) {
      ++network_calls_;
      const HttpReply reply = transport_->post(body);
      if (reply.status == 200) {
        const ChatReply chat = parse_chat_reply(reply.body);
        CompletionRecord rec;
        rec.request_key = key;
        rec.response_text = chat.text;
        rec.latency_ms = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - start)
                             .count();
        rec.timestamp = utc_timestamp();
        rec.attempt_count = attempt;
        rec.truncated = chat.truncated;
        cache_->append(rec);
        return rec;
      }
      if (reply.status == 401 || reply.status == 403) {
        throw AuthError("HTTP " + std::to_string(reply.status) + ": " + reply.body);
      }
      if (reply.status == 429) {
        if (attempt >= retry_.max_attempts) {
          throw RateLimited("rate limited after " + std::to_string(attempt) + " attempts");
        }
        sleep_(backoff);
        backoff = std::min(retry_.max_backoff,
                           std::chrono::milliseconds(static_cast<std::int64_t>(
                               static_cast<double>(backoff.count()) * retry_.factor)));
        continue;
      }
      if (reply.status == 0) throw TransportError("request failed: " + reply.error);
      throw TransportError("HTTP " + std::to_string(reply.status) + ": " + reply.body);
    }
  }

  struct BatchItem {
    std::optional<CompletionRecord> record;
    std::string error;  // empty on success
  };

  // Results follow input order; failures stay per item.
  std::vector<BatchItem> run_batch(const std::vector<CompletionRequest>& requests,
                                   std::size_t max_in_flight) {
    if (max_in_flight < 1) throw std::invalid_argument("max_in_flight must be >= 1");
    std::vector<BatchItem> out(requests.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i = next++; i < requests.size(); i = next++) {
        try {
          out[i].record = complete(requests[i]);
        } catch (const std::exception& e) {
          out[i].error = e.what();
        }
      }
    };
    const std::size_t n = std::min(max_in_flight, requests.size());
    if (n <= 1) {
      worker();
      return out;
    }
    std::vector<std::thread> threads;
    threads.reserve(n);
    for (std::size_t t = 0; t < n; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    return out;
  }

  std::size_t network_calls() const { return network_calls_; }
  ResponseCache& cache() { return *cache_; }

 private:
  std::shared_ptr<ChatTransport> transport_;
  std::shared_ptr<ResponseCache> cache_;
  RetryPolicy retry_;
  Sleeper sleep_;
  std::atomic<std::size_t> network_calls_{0};
};

}  // namespace iegauge

#endif  // IEGAUGE_GATEWAY_HPP_
