#pragma once

#include "tr/backend.hpp"
#include "tr/ensemble.hpp"

#include <cstdint>
#include <vector>

namespace tr {

struct SyntheticModelParams {
    double step_error_prob = 0.3;       // p
    double analyzer_recall = 1.0;       // r
    double analyzer_false_positive = 0.0; // q
    int chain_length = 6;               // T
    std::uint64_t rng_seed = 0;
    // Multiplier applied to the step error probability once per experience
    // present in the generation prompt; models the guidance the accumulated
    // analyses provide.
    double experience_discount = 0.5;
};

struct SyntheticTask {
    std::string id;
    std::string question;
    Value ground_truth;
    std::vector<int> addends;
};

// Simulated hallucinating solver/analyzer over running-sum questions. The
// solver answers the production generation prompt: it reads the existing
// steps, adds the next number, and with some probability reports a corrupted
// total; later steps build on whatever total came before, so one bad step
// propagates. The analyzer answers the production analysis prompt: it
// recomputes each step locally, flags a truly wrong step with probability r
// and a correct one with probability q, and phrases its verdicts so the
// production parser picks up the indexes. All randomness derives from
// (seed, task id, prompt context), so identical requests get identical
// responses.
class SyntheticBackend : public Backend {
public:
    SyntheticBackend(SyntheticModelParams params, std::string generation_system,
                     std::string analysis_system);

    SyntheticTask make_task(int question_index) const;

    CompletionResponse complete(const CompletionRequest& request) override;

    const SyntheticModelParams& params() const { return params_; }

    // True local error: the step's reported total differs from the previous
    // total plus the step's addend. Exposed for verdict oracles in tests.
    static std::vector<int> wrong_step_indexes(const std::vector<std::string>& steps);
    static long parse_step_total(const std::string& step_text);

private:
    SyntheticModelParams params_;
    std::string generation_system_;
    std::string analysis_system_;

    CompletionResponse solve(const CompletionRequest& request) const;
    CompletionResponse analyze(const CompletionRequest& request) const;
};

} // namespace tr
