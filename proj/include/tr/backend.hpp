#pragma once

#include <cstdint>
#include <deque>
#include <mutex>
#include <string>
#include <unordered_map>

namespace tr {

struct CompletionRequest {
    std::string system;
    std::string user;
    double temperature = 0.7;
    double top_p = 0.7;
    std::string model;
};

struct CompletionResponse {
    std::string text;
    long prompt_tokens = 0;
    long generated_tokens = 0;
    bool tokens_estimated = false;
};

class Backend {
public:
    virtual ~Backend() = default;
    virtual CompletionResponse complete(const CompletionRequest& request) = 0;
};

// ceil(characters / 4), used whenever a provider omits usage counts.
long estimate_tokens(const std::string& text);

// FNV-1a over system + user, used for transcript keys and call logs.
std::uint64_t request_digest(const CompletionRequest& request);
std::string digest_hex(std::uint64_t digest);

// Deterministic backend for tests and fixtures. Two lookup modes, checked
// in order:
//   1. responses keyed by request digest;
//   2. per-role FIFO queues, where the role is told apart by which system
//      prompt the request carries.
// A request that matches neither is a transcript miss and throws.
class ScriptedBackend : public Backend {
public:
    ScriptedBackend(std::string generation_system, std::string analysis_system);

    void add_keyed(const CompletionRequest& request, std::string text);
    void queue_generation(std::string text);
    void queue_analysis(std::string text);

    // {"generation": [...], "analysis": [...]} queue transcript.
    void load_json_file(const std::string& path);

    CompletionResponse complete(const CompletionRequest& request) override;

private:
    std::string generation_system_;
    std::string analysis_system_;
    std::unordered_map<std::uint64_t, std::string> keyed_;
    std::deque<std::string> generation_queue_;
    std::deque<std::string> analysis_queue_;
    std::mutex mutex_;
};

} // namespace tr
