#include "tr/backend.hpp"

#include "tr/error.hpp"

#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <sstream>

namespace tr {

long estimate_tokens(const std::string& text) {
    return static_cast<long>((text.size() + 3) / 4);
}

namespace {

std::uint64_t fnv1a(std::uint64_t h, const std::string& s) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace

std::uint64_t request_digest(const CompletionRequest& request) {
    std::uint64_t h = 14695981039346656037ULL;
    h = fnv1a(h, request.system);
    h ^= 0xff;
    h *= 1099511628211ULL;
    h = fnv1a(h, request.user);
    return h;
}

std::string digest_hex(std::uint64_t digest) {
    std::ostringstream out;
    out << std::hex << std::setfill('0') << std::setw(16) << digest;
    return out.str();
}

ScriptedBackend::ScriptedBackend(std::string generation_system, std::string analysis_system)
    : generation_system_(std::move(generation_system)),
      analysis_system_(std::move(analysis_system)) {}

void ScriptedBackend::add_keyed(const CompletionRequest& request, std::string text) {
    keyed_[request_digest(request)] = std::move(text);
}

void ScriptedBackend::queue_generation(std::string text) {
    generation_queue_.push_back(std::move(text));
}

void ScriptedBackend::queue_analysis(std::string text) {
    analysis_queue_.push_back(std::move(text));
}

void ScriptedBackend::load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read scripted transcript: " + path);
    nlohmann::json doc;
    in >> doc;
    for (const auto& entry : doc.value("generation", nlohmann::json::array()))
        queue_generation(entry.get<std::string>());
    for (const auto& entry : doc.value("analysis", nlohmann::json::array()))
        queue_analysis(entry.get<std::string>());
}

CompletionResponse ScriptedBackend::complete(const CompletionRequest& request) {
    std::lock_guard<std::mutex> lock(mutex_);
    std::string text;
    if (auto it = keyed_.find(request_digest(request)); it != keyed_.end()) {
        text = it->second;
    } else if (request.system == generation_system_ && !generation_queue_.empty()) {
        text = std::move(generation_queue_.front());
        generation_queue_.pop_front();
    } else if (request.system == analysis_system_ && !analysis_queue_.empty()) {
        text = std::move(analysis_queue_.front());
        analysis_queue_.pop_front();
    } else {
        throw Error("scripted backend transcript miss (digest " +
                    digest_hex(request_digest(request)) + ")");
    }
    CompletionResponse response;
    response.text = std::move(text);
    response.prompt_tokens = estimate_tokens(request.system) + estimate_tokens(request.user);
    response.generated_tokens = estimate_tokens(response.text);
    return response;
}

} // namespace tr
