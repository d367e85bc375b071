#include "tr/http_backend.hpp"

#include "tr/error.hpp"

#include <httplib.h>
#include <json.hpp>

#include <cstdlib>
#include <thread>

namespace tr {

namespace {

bool retryable_status(int status) {
    return status == 429 || (status >= 500 && status < 600);
}

} // namespace

HttpBackend::HttpBackend(HttpBackendOptions options) : options_(std::move(options)) {
    if (const char* key = std::getenv(options_.api_key_env.c_str())) api_key_ = key;
}

CompletionResponse HttpBackend::complete(const CompletionRequest& request) {
    nlohmann::json body = {
        {"model", request.model.empty() ? options_.model : request.model},
        {"messages",
         {{{"role", "system"}, {"content", request.system}},
          {{"role", "user"}, {"content", request.user}}}},
        {"temperature", request.temperature},
        {"top_p", request.top_p},
    };
    const std::string payload = body.dump();

    std::string last_error;
    for (int attempt = 0; attempt <= options_.max_retries; ++attempt) {
        if (attempt > 0) {
            const auto delay = options_.retry_base_delay * (1 << (attempt - 1));
            std::this_thread::sleep_for(delay);
        }

        httplib::Client client(options_.base_url);
        client.set_connection_timeout(options_.timeout);
        client.set_read_timeout(options_.timeout);
        httplib::Headers headers;
        if (!api_key_.empty())
            headers.emplace("Authorization", "Bearer " + api_key_);

        auto result = client.Post(options_.path, headers, payload, "application/json");
        if (!result) {
            last_error = "transport error: " + httplib::to_string(result.error());
            continue; // timeouts and connection failures are retryable
        }
        if (result->status != 200) {
            last_error = "provider status " + std::to_string(result->status) + ": " +
                         result->body;
            if (retryable_status(result->status)) continue;
            throw Error("chat completion failed, " + last_error);
        }

        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(result->body);
        } catch (const nlohmann::json::exception& e) {
            throw Error(std::string("malformed provider payload: ") + e.what());
        }
        try {
            CompletionResponse response;
            response.text =
                doc.at("choices").at(0).at("message").at("content").get<std::string>();
            if (doc.contains("usage") && doc["usage"].contains("prompt_tokens")) {
                response.prompt_tokens = doc["usage"]["prompt_tokens"].get<long>();
                response.generated_tokens =
                    doc["usage"].value("completion_tokens", 0L);
            } else {
                response.prompt_tokens =
                    estimate_tokens(request.system) + estimate_tokens(request.user);
                response.generated_tokens = estimate_tokens(response.text);
                response.tokens_estimated = true;
            }
            return response;
        } catch (const nlohmann::json::exception& e) {
            throw Error(std::string("malformed provider payload: ") + e.what());
        }
    }
    throw Error("retry budget exhausted, last " + last_error);
}

} // namespace tr
