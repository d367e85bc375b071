#pragma once

#include "tr/backend.hpp"

#include <chrono>
#include <string>

namespace tr {

struct HttpBackendOptions {
    std::string base_url = "https://api.openai.com";
    std::string path = "/v1/chat/completions";
    std::string model = "gpt-4";
    std::string api_key_env = "OPENAI_API_KEY";
    int max_retries = 3;
    std::chrono::milliseconds retry_base_delay{1000}; // 1s, 2s, 4s
    std::chrono::seconds timeout{120};
};

// Chat-completions client over HTTP. Retries timeouts, 429 and 5xx with
// bounded exponential backoff; other statuses fail immediately. When the
// provider omits usage counts, tokens are estimated as ceil(chars/4) and the
// response is marked accordingly.
class HttpBackend : public Backend {
public:
    explicit HttpBackend(HttpBackendOptions options);

    CompletionResponse complete(const CompletionRequest& request) override;

private:
    HttpBackendOptions options_;
    std::string api_key_;
};

} // namespace tr
