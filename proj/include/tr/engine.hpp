#pragma once

#include "tr/backend.hpp"
#include "tr/ensemble.hpp"
#include "tr/graph.hpp"
#include "tr/prompts.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace tr {

struct RunConfig {
    int k = 8;                      // solution target, early stopping
    int u = 3;                      // incoming-rollback cap per thought
    int max_outgoing_per_thought = 3;
    int max_outgoing_per_path = 5;
    int max_steps = 12;
    double temperature = 0.7;
    double top_p = 0.7;
    bool parallel = false;
    bool structured_verdicts = false;
    std::string problem_name = "Mathematics";
    std::string model = "gpt-4";
    AnswerKind answer_kind = AnswerKind::Numeric;
    std::size_t max_nodes = 100000; // safety bound on graph growth
    int workers = 4;                // parallel mode only

    GraphLimits limits() const {
        return GraphLimits{u, max_outgoing_per_thought, max_outgoing_per_path, max_steps};
    }
};

struct CallRecord {
    std::string role; // "generation" or "analysis"
    std::string prompt_digest;
    long prompt_tokens = 0;
    long generated_tokens = 0;
};

struct RunResult {
    ThoughtGraph graph;
    std::vector<Solution> solutions;
    std::optional<Value> final_value; // weighted vote; absent when unsolved
    long interactions = 0;            // generation calls + analysis calls
    long prompt_tokens = 0;
    long generated_tokens = 0;
    bool tokens_estimated = false;
    double wall_time_s = 0.0;
    bool backend_error = false;
    std::string error_message;
    std::vector<CallRecord> calls;
};

// Scheduling rule: most experience-carrying path first, ties broken by
// deeper frontier (depth-first), remaining ties by creation ordinal.
PathId select_next_path(const ThoughtGraph& graph, const std::vector<PathId>& active);

bool should_stop(std::size_t solution_count, std::size_t active_path_count, int k);

// The full generate-analyze-maybe-rollback loop, stopping at K solutions or
// exhaustion and finishing with the weighted vote.
RunResult run_question(const std::string& question, const RunConfig& config,
                       Backend& backend,
                       const PromptTemplateSet& templates = PromptTemplateSet::defaults());

// Forward-only single path: no analysis calls, no rollbacks.
RunResult run_chain_baseline(const std::string& question, const RunConfig& config,
                             Backend& backend,
                             const PromptTemplateSet& templates = PromptTemplateSet::defaults());

} // namespace tr
