#include "tr/harness.hpp"

#include "tr/error.hpp"
#include "tr/game24.hpp"

#include <json.hpp>

#include <cctype>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace tr {

namespace {

AnswerKind kind_from_string(const std::string& s) {
    if (s == "numeric") return AnswerKind::Numeric;
    if (s == "multiple_choice") return AnswerKind::MultipleChoice;
    if (s == "game24") return AnswerKind::Game24;
    throw Error("unknown answer kind: " + s);
}

std::string gsm8k_final_answer(const std::string& answer) {
    const std::size_t pos = answer.rfind("#### ");
    if (pos == std::string::npos)
        throw Error("gsm8k record without '#### ' delimiter");
    std::string tail = answer.substr(pos + 5);
    const std::size_t nl = tail.find('\n');
    if (nl != std::string::npos) tail = tail.substr(0, nl);
    return tail;
}

} // namespace

Value BenchmarkTask::truth_value() const {
    switch (kind) {
    case AnswerKind::Numeric:
        return Value::numeric(parse_numeric(ground_truth));
    case AnswerKind::MultipleChoice: {
        for (char c : ground_truth)
            if (std::isalpha(static_cast<unsigned char>(c)))
                return Value::choice(std::string(
                    1, static_cast<char>(std::toupper(static_cast<unsigned char>(c)))));
        throw Error("multiple-choice ground truth without a letter: " + ground_truth);
    }
    case AnswerKind::Game24:
        return Value::expression(ground_truth);
    }
    throw Error("unknown answer kind");
}

std::array<int, 4> BenchmarkTask::game24_numbers() const {
    std::array<int, 4> numbers{};
    std::istringstream in(ground_truth);
    for (int& n : numbers)
        if (!(in >> n)) throw Error("game24 ground truth must hold four numbers: " + ground_truth);
    return numbers;
}

std::vector<BenchmarkTask> load_dataset(const std::string& path, DatasetFormat format) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read dataset file: " + path);

    std::vector<BenchmarkTask> tasks;
    std::string line;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json record;
        try {
            record = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw Error("malformed record at line " + std::to_string(line_number) + ": " +
                        e.what());
        }
        try {
            BenchmarkTask task;
            task.id = record.value("id", "q" + std::to_string(tasks.size()));
            task.question = record.at("question").get<std::string>();
            const std::string answer = record.at("answer").get<std::string>();
            task.ground_truth =
                format == DatasetFormat::Gsm8kNative ? gsm8k_final_answer(answer) : answer;
            task.kind = kind_from_string(record.value("kind", std::string("numeric")));
            task.problem_name = record.value("problem_name", std::string("Mathematics"));
            task.truth_value(); // fail early on unparseable ground truth
            tasks.push_back(std::move(task));
        } catch (const std::exception& e) {
            throw Error("malformed record at line " + std::to_string(line_number) + ": " +
                        e.what());
        }
    }
    if (tasks.empty())
        std::cerr << "warning: dataset " << path << " contains no tasks\n";
    return tasks;
}

bool compare_answer(const Value& extracted, const BenchmarkTask& task) {
    if (extracted.kind != task.kind) throw Error("answer kind mismatch");
    if (task.kind == AnswerKind::Game24)
        return validate_game24(extracted.text, task.game24_numbers());
    return values_equal(extracted, task.truth_value());
}

namespace {

struct MeanStd {
    double mean = 0.0, stddev = 0.0;
};

template <typename Get>
MeanStd mean_std(const std::vector<QuestionRecord>& records, Get get) {
    double sum = 0.0;
    for (const auto& r : records) sum += static_cast<double>(get(r));
    const double mean = sum / static_cast<double>(records.size());
    double var = 0.0;
    for (const auto& r : records) {
        const double d = static_cast<double>(get(r)) - mean;
        var += d * d;
    }
    var /= static_cast<double>(records.size());
    return {mean, std::sqrt(var)};
}

} // namespace

MetricsReport aggregate_metrics(const std::vector<QuestionRecord>& records) {
    if (records.empty()) throw Error("aggregate_metrics on empty records");
    MetricsReport report;
    report.total = records.size();
    for (const auto& r : records) {
        if (r.solved) ++report.solved;
        if (r.tokens_estimated) report.any_tokens_estimated = true;
    }
    report.solve_rate =
        100.0 * static_cast<double>(report.solved) / static_cast<double>(report.total);
    const auto inter = mean_std(records, [](const QuestionRecord& r) { return r.interactions; });
    report.mean_interactions = inter.mean;
    report.stddev_interactions = inter.stddev;
    const auto pt = mean_std(records, [](const QuestionRecord& r) { return r.prompt_tokens; });
    report.mean_prompt_tokens = pt.mean;
    report.stddev_prompt_tokens = pt.stddev;
    const auto gt = mean_std(records, [](const QuestionRecord& r) { return r.generated_tokens; });
    report.mean_generated_tokens = gt.mean;
    report.stddev_generated_tokens = gt.stddev;
    report.records = records;
    return report;
}

} // namespace tr
