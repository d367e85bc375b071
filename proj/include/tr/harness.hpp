#pragma once

#include "tr/ensemble.hpp"

#include <array>
#include <string>
#include <vector>

namespace tr {

struct BenchmarkTask {
    std::string id;
    std::string question;
    std::string ground_truth; // raw; normalized through `truth_value`
    AnswerKind kind = AnswerKind::Numeric;
    std::string problem_name = "Mathematics";

    Value truth_value() const;
    // Game-of-24 tasks carry their four numbers in the ground-truth field.
    std::array<int, 4> game24_numbers() const;
};

enum class DatasetFormat { Jsonl, Gsm8kNative };

// jsonl schema: {id?, question, answer, kind?, problem_name?}; defaults
// kind=numeric, problem_name="Mathematics". gsm8k_native records carry the
// answer after the "#### " delimiter inside the answer field.
std::vector<BenchmarkTask> load_dataset(const std::string& path, DatasetFormat format);

// Numeric: tolerance comparison. Choice: letter equality. Game24: the
// extracted expression is validated against the task's four numbers.
bool compare_answer(const Value& extracted, const BenchmarkTask& task);

struct QuestionRecord {
    std::string id;
    bool solved = false;
    long interactions = 0;
    long prompt_tokens = 0;
    long generated_tokens = 0;
    bool tokens_estimated = false;
};

struct MetricsReport {
    double solve_rate = 0.0; // percent
    double mean_interactions = 0.0, stddev_interactions = 0.0;
    double mean_prompt_tokens = 0.0, stddev_prompt_tokens = 0.0;
    double mean_generated_tokens = 0.0, stddev_generated_tokens = 0.0;
    bool any_tokens_estimated = false;
    std::size_t total = 0, solved = 0;
    std::vector<QuestionRecord> records;
};

// Population standard deviations, matching single-run reporting.
MetricsReport aggregate_metrics(const std::vector<QuestionRecord>& records);

} // namespace tr
