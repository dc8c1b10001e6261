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

// HTTP(S) transport for the chat-completions endpoint.

#ifndef IEGAUGE_HTTP_TRANSPORT_HPP_
#define IEGAUGE_HTTP_TRANSPORT_HPP_

#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

#include <cstdlib>
#include <string>
#include <utility>

#include "iegauge/gateway.hpp"

namespace iegauge {

inline constexpr char kApiBaseEnv[] = "IEGAUGE_API_BASE";
inline constexpr char kApiKeyEnv[] = "IEGAUGE_API_KEY";
inline constexpr char kCacheDirEnv[] = "IEGAUGE_CACHE_DIR";
inline constexpr char kDefaultApiBase[] = "https://api.openai.com/v1";

inline std::string env_or(const char* name, std::string fallback = {}) {
  const char* v = std::getenv(name);
  return v != nullptr && *v != '\0' ? std::string(v) : std::move(fallback);
}

// "https://host:port/v1" -> {"https://host:port", "/v1"}
inline std::pair<std::string, std::string> split_base_url(const std::string& base) {
  const auto scheme = base.find("://");
  const auto slash = base.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  if (slash == std::string::npos) return {base, ""};
  std::string path = base.substr(slash);
  while (!path.empty() && path.back() == '/') path.pop_back();
  return {base.substr(0, slash), path};
}

class HttpChatTransport : public ChatTransport {
 public:
  HttpChatTransport(std::string base_url, std::string api_key)
      : api_key_(std::move(api_key)) {
    std::tie(origin_, path_) = split_base_url(base_url);
    path_ += "/chat/completions";
  }

  static std::shared_ptr<HttpChatTransport> from_env() {
    return std::make_shared<HttpChatTransport>(env_or(kApiBaseEnv, kDefaultApiBase), env_or(kApiKeyEnv));
  }

  bool has_credentials() const override { return !api_key_.empty(); }

  HttpReply post(const std::string& json_body) override {
    httplib::Client client(origin_);
    client.set_connection_timeout(30);
    client.set_read_timeout(300);
    httplib::Headers headers = {{"Authorization", "Bearer " + api_key_}};
    auto res = client.Post(path_, headers, json_body, "application/json");
    HttpReply out;
    if (!res) {
      out.error = httplib::to_string(res.error());
      return out;
    }
    out.status = res->status;
    out.body = res->body;
    return out;
  }

 private:
  std::string origin_;
  std::string path_;
  std::string api_key_;
};

}  // namespace iegauge

#endif  // IEGAUGE_HTTP_TRANSPORT_HPP_
