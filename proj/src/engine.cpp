#include "tr/engine.hpp"

#include "tr/error.hpp"
#include "tr/rollback.hpp"

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <map>
#include <mutex>
#include <thread>
#include <unordered_set>

namespace tr {

PathId select_next_path(const ThoughtGraph& graph, const std::vector<PathId>& active) {
    if (active.empty()) throw Error("no active paths");
    PathId best = active.front();
    int best_priority = -1;
    int best_depth = -1;
    for (PathId id : active) {
        const auto& p = graph.path(id);
        int priority = p.pending_experience ? 1 : 0;
        for (NodeId n : p.nodes)
            if (graph.node(n).experience) ++priority;
        const int depth = graph.node(p.nodes.back()).step;
        if (priority > best_priority ||
            (priority == best_priority && depth > best_depth) ||
            (priority == best_priority && depth == best_depth && id < best)) {
            best = id;
            best_priority = priority;
            best_depth = depth;
        }
    }
    return best;
}

bool should_stop(std::size_t solution_count, std::size_t active_path_count, int k) {
    return solution_count >= static_cast<std::size_t>(k) || active_path_count == 0;
}

namespace {

std::vector<std::string> labeled_steps(const ThoughtGraph& graph, PathId path) {
    std::vector<std::string> steps = graph.path_step_texts(path);
    for (std::size_t i = 0; i < steps.size(); ++i)
        steps[i] = ensure_step_label(steps[i], static_cast<int>(i) + 1);
    return steps;
}

// Shared run state; every mutation goes through the coordinator mutex in
// parallel mode.
struct RunState {
    ThoughtGraph graph;
    std::vector<Solution> solutions;
    int completion_ordinal = 0;
    long interactions = 0;
    long prompt_tokens = 0;
    long generated_tokens = 0;
    bool tokens_estimated = false;
    std::vector<CallRecord> calls;
    bool backend_error = false;
    std::string error_message;

    explicit RunState(GraphLimits limits) : graph(limits) {}

    void account(const char* role, const CompletionRequest& request,
                 const CompletionResponse& response) {
        ++interactions;
        prompt_tokens += response.prompt_tokens;
        generated_tokens += response.generated_tokens;
        if (response.tokens_estimated) tokens_estimated = true;
        calls.push_back({role, digest_hex(request_digest(request)),
                         response.prompt_tokens, response.generated_tokens});
    }

    std::vector<PathId> active_paths() const {
        std::vector<PathId> out;
        for (const auto& p : graph.paths())
            if (!p.frozen && !p.terminal) out.push_back(p.id);
        return out;
    }
};

class Runner {
public:
    Runner(const std::string& question, const RunConfig& config, Backend& backend,
           const PromptTemplateSet& templates)
        : question_(question), config_(config), backend_(backend),
          templates_(templates), state_(config.limits()) {}

    RunResult run() {
        const auto start = std::chrono::steady_clock::now();
        state_.graph.add_root(question_);
        if (config_.parallel)
            run_parallel();
        else
            run_sequential();
        RunResult result = finish();
        result.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        return result;
    }

private:
    const std::string& question_;
    const RunConfig& config_;
    Backend& backend_;
    const PromptTemplateSet& templates_;
    RunState state_;

    std::mutex mutex_;
    std::condition_variable cv_;
    std::unordered_set<PathId> in_flight_;

    bool stopping() const {
        return state_.backend_error ||
               state_.solutions.size() >= static_cast<std::size_t>(config_.k) ||
               state_.graph.node_count() >= config_.max_nodes;
    }

    void run_sequential() {
        while (!stopping()) {
            const auto active = state_.active_paths();
            if (active.empty()) break;
            advance_path(select_next_path(state_.graph, active), nullptr);
        }
    }

    void run_parallel() {
        const int worker_count = std::max(1, config_.workers);
        std::vector<std::thread> workers;
        workers.reserve(static_cast<std::size_t>(worker_count));
        for (int i = 0; i < worker_count; ++i)
            workers.emplace_back([this] { worker_loop(); });
        for (auto& w : workers) w.join();
    }

    void worker_loop() {
        std::unique_lock<std::mutex> lock(mutex_);
        while (true) {
            if (stopping()) break;
            std::vector<PathId> available;
            for (PathId id : state_.active_paths())
                if (!in_flight_.count(id)) available.push_back(id);
            if (available.empty()) {
                if (in_flight_.empty()) break; // exhaustion
                cv_.wait(lock);
                continue;
            }
            const PathId path = select_next_path(state_.graph, available);
            in_flight_.insert(path);
            advance_path(path, &lock);
            in_flight_.erase(path);
            cv_.notify_all();
        }
        cv_.notify_all();
    }

    // One reasoning unit: generate the next thought on `path`, then analyze
    // the extended path and maybe spawn a rollback path. In parallel mode
    // `lock` is held on entry and exit and released around backend calls.
    void advance_path(PathId path, std::unique_lock<std::mutex>* lock) {
        const auto experiences = state_.graph.path_experiences(path);
        const auto steps = labeled_steps(state_.graph, path);
        const std::string generation_prompt = render_generation_prompt(
            templates_, config_.problem_name, question_, experiences, steps);

        CompletionRequest gen_request{templates_.generation_system, generation_prompt,
                                      config_.temperature, config_.top_p, config_.model};
        CompletionResponse gen_response;
        if (lock) lock->unlock();
        bool failed = false;
        std::string failure;
        try {
            gen_response = backend_.complete(gen_request);
        } catch (const std::exception& e) {
            failed = true;
            failure = e.what();
        }
        if (lock) lock->lock();
        if (failed) {
            state_.backend_error = true;
            state_.error_message = failure;
            return;
        }
        state_.account("generation", gen_request, gen_response);

        const bool is_solution = contains_solution_marker(gen_response.text);
        const NodeId node = state_.graph.append_thought(path, gen_response.text, is_solution);

        // Analysis of the extended path: exactly one call per generated thought.
        auto analyzed_steps = labeled_steps(state_.graph, path);
        std::string analysis_prompt = render_analysis_prompt(
            templates_, config_.problem_name, question_, analyzed_steps);
        if (config_.structured_verdicts) analysis_prompt += kStructuredVerdictInstruction;

        CompletionRequest analysis_request{templates_.analysis_system, analysis_prompt,
                                           config_.temperature, config_.top_p,
                                           config_.model};
        CompletionResponse analysis_response;
        if (lock) lock->unlock();
        try {
            analysis_response = backend_.complete(analysis_request);
        } catch (const std::exception& e) {
            failed = true;
            failure = e.what();
        }
        if (lock) lock->lock();
        if (failed) {
            state_.backend_error = true;
            state_.error_message = failure;
            return;
        }
        state_.account("analysis", analysis_request, analysis_response);

        const ErrorAnalysis analysis = parse_bad_steps(
            analysis_response.text, static_cast<int>(analyzed_steps.size()));
        maybe_rollback(path, node, analysis);

        if (is_solution) {
            register_solution(path, node, gen_response.text);
        } else if (state_.graph.node(node).step >= config_.max_steps) {
            state_.graph.mark_terminal(path); // depth bound hit, no solution
        }
    }

    void maybe_rollback(PathId path, NodeId source, const ErrorAnalysis& analysis) {
        if (analysis.bad_steps.empty()) return;
        // A thought at the per-thought cap keeps its analysis but triggers no
        // further rollback.
        if (state_.graph.node(source).outgoing_rollbacks >= config_.max_outgoing_per_thought)
            return;
        const auto& p = state_.graph.path(path);
        std::map<int, int> incoming_counts;
        for (NodeId id : p.nodes)
            incoming_counts[state_.graph.node(id).step] =
                state_.graph.node(id).incoming_rollbacks;
        const auto destination =
            select_destination(analysis.bad_steps, incoming_counts, config_.u);
        if (!destination) return;
        const NodeId dst = p.nodes[static_cast<std::size_t>(*destination)];
        state_.graph.spawn_rollback_path(source, dst, analysis.raw_text);
        state_.graph.record_outgoing_trigger(path);
    }

    void register_solution(PathId path, NodeId node, const std::string& text) {
        Value value;
        try {
            value = extract_solution_value(text, config_.answer_kind);
        } catch (const Error&) {
            return; // marker present but value unusable; path stays terminal
        }
        if (state_.solutions.size() >= static_cast<std::size_t>(config_.k))
            return; // completion-order cutoff in parallel mode
        const PathScore score = state_.graph.path_alpha_beta(path);
        Solution solution;
        solution.node = node;
        solution.raw_text = text;
        solution.value = value;
        solution.weight = score.beta - score.alpha;
        solution.completion_ordinal = state_.completion_ordinal++;
        state_.solutions.push_back(std::move(solution));
    }

    RunResult finish() {
        RunResult result;
        result.solutions = state_.solutions;
        result.interactions = state_.interactions;
        result.prompt_tokens = state_.prompt_tokens;
        result.generated_tokens = state_.generated_tokens;
        result.tokens_estimated = state_.tokens_estimated;
        result.backend_error = state_.backend_error;
        result.error_message = state_.error_message;
        result.calls = state_.calls;
        if (!result.solutions.empty())
            result.final_value = weighted_vote(result.solutions);
        result.graph = std::move(state_.graph);
        return result;
    }
};

} // namespace

RunResult run_question(const std::string& question, const RunConfig& config,
                       Backend& backend, const PromptTemplateSet& templates) {
    Runner runner(question, config, backend, templates);
    return runner.run();
}

RunResult run_chain_baseline(const std::string& question, const RunConfig& config,
                             Backend& backend, const PromptTemplateSet& templates) {
    const auto start = std::chrono::steady_clock::now();
    RunState state(config.limits());
    state.graph.add_root(question);
    const PathId path = 0;
    while (true) {
        const auto& p = state.graph.path(path);
        if (p.terminal) break;
        const auto steps = labeled_steps(state.graph, path);
        const std::string prompt = render_generation_prompt(
            templates, config.problem_name, question, {}, steps);
        CompletionRequest request{templates.generation_system, prompt,
                                  config.temperature, config.top_p, config.model};
        CompletionResponse response;
        try {
            response = backend.complete(request);
        } catch (const std::exception& e) {
            state.backend_error = true;
            state.error_message = e.what();
            break;
        }
        state.account("generation", request, response);
        const bool is_solution = contains_solution_marker(response.text);
        const NodeId node = state.graph.append_thought(path, response.text, is_solution);
        if (is_solution) {
            try {
                Solution solution;
                solution.node = node;
                solution.raw_text = response.text;
                solution.value = extract_solution_value(response.text, config.answer_kind);
                solution.weight = 0;
                solution.completion_ordinal = 0;
                state.solutions.push_back(std::move(solution));
            } catch (const Error&) {
            }
            break;
        }
        if (state.graph.node(node).step >= config.max_steps) {
            state.graph.mark_terminal(path);
            break;
        }
    }

    RunResult result;
    result.solutions = state.solutions;
    result.interactions = state.interactions;
    result.prompt_tokens = state.prompt_tokens;
    result.generated_tokens = state.generated_tokens;
    result.tokens_estimated = state.tokens_estimated;
    result.backend_error = state.backend_error;
    result.error_message = state.error_message;
    result.calls = state.calls;
    if (!result.solutions.empty()) result.final_value = result.solutions.front().value;
    result.graph = std::move(state.graph);
    result.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

} // namespace tr
