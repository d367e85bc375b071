// Command-line front end: solve a single question, benchmark a dataset,
// re-export stored graphs, or sweep the simulated model.

#include "tr/backend.hpp"
#include "tr/engine.hpp"
#include "tr/error.hpp"
#include "tr/harness.hpp"
#include "tr/http_backend.hpp"
#include "tr/prompts.hpp"
#include "tr/run_record.hpp"
#include "tr/serialize.hpp"
#include "tr/synthetic.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct CommonOptions {
    std::string backend_spec = "live";
    std::string base_url = "https://api.openai.com";
    std::string api_key_env = "OPENAI_API_KEY";
    std::string out_dir;
    tr::RunConfig config;
};

void add_common_flags(CLI::App& cmd, CommonOptions& opts) {
    cmd.add_option("--backend", opts.backend_spec,
                   "Backend: live, scripted:<file>, or synthetic:<k=v,...> "
                   "(keys p, r, q, T, seed, discount)");
    cmd.add_option("--model", opts.config.model, "Model name sent to the provider");
    cmd.add_option("--base-url", opts.base_url, "Provider base URL (live backend)");
    cmd.add_option("--api-key-env", opts.api_key_env,
                   "Environment variable holding the API key (live backend)");
    cmd.add_option("--k", opts.config.k, "Stop after this many solutions");
    cmd.add_option("--u", opts.config.u, "Incoming-rollback cap per thought");
    cmd.add_option("--max-outgoing-thought", opts.config.max_outgoing_per_thought,
                   "Outgoing-rollback cap per thought");
    cmd.add_option("--max-outgoing-path", opts.config.max_outgoing_per_path,
                   "Rollbacks a path may trigger before it is frozen");
    cmd.add_option("--max-steps", opts.config.max_steps, "Depth bound per path");
    cmd.add_option("--temperature", opts.config.temperature, "Sampling temperature");
    cmd.add_option("--top-p", opts.config.top_p, "Nucleus sampling parameter");
    cmd.add_flag("--parallel", opts.config.parallel, "Advance paths concurrently");
    cmd.add_flag("--structured-verdicts", opts.config.structured_verdicts,
                 "Ask the analyzer for a machine-readable verdict line");
    cmd.add_option("--workers", opts.config.workers, "Worker threads in parallel mode");
    cmd.add_option("--problem-name", opts.config.problem_name,
                   "Problem name substituted into the prompts");
    cmd.add_option("--out", opts.out_dir, "Output directory for run records");
    cmd.set_config("--config", "", "Read options from a TOML/INI file; flags win");
}

tr::SyntheticModelParams parse_synthetic_params(const std::string& spec) {
    tr::SyntheticModelParams params;
    std::istringstream in(spec);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw tr::Error("synthetic parameter without '=': " + item);
        const std::string key = item.substr(0, eq);
        const std::string value = item.substr(eq + 1);
        if (key == "p") params.step_error_prob = std::stod(value);
        else if (key == "r") params.analyzer_recall = std::stod(value);
        else if (key == "q") params.analyzer_false_positive = std::stod(value);
        else if (key == "T") params.chain_length = std::stoi(value);
        else if (key == "seed") params.rng_seed = std::stoull(value);
        else if (key == "discount") params.experience_discount = std::stod(value);
        else throw tr::Error("unknown synthetic parameter: " + key);
    }
    return params;
}

std::unique_ptr<tr::Backend> make_backend(const CommonOptions& opts,
                                          const tr::PromptTemplateSet& templates) {
    const std::string& spec = opts.backend_spec;
    if (spec == "live") {
        tr::HttpBackendOptions http;
        http.base_url = opts.base_url;
        http.model = opts.config.model;
        http.api_key_env = opts.api_key_env;
        return std::make_unique<tr::HttpBackend>(http);
    }
    if (spec.rfind("scripted:", 0) == 0) {
        auto backend = std::make_unique<tr::ScriptedBackend>(templates.generation_system,
                                                             templates.analysis_system);
        backend->load_json_file(spec.substr(9));
        return backend;
    }
    if (spec.rfind("synthetic", 0) == 0) {
        const std::string params_spec = spec.size() > 9 ? spec.substr(10) : "";
        return std::make_unique<tr::SyntheticBackend>(parse_synthetic_params(params_spec),
                                                      templates.generation_system,
                                                      templates.analysis_system);
    }
    throw tr::Error("unknown backend: " + spec +
                    " (expected live, scripted:<file>, or synthetic:<params>)");
}

tr::AnswerKind parse_kind(const std::string& kind) {
    if (kind == "numeric") return tr::AnswerKind::Numeric;
    if (kind == "multiple_choice") return tr::AnswerKind::MultipleChoice;
    if (kind == "game24") return tr::AnswerKind::Game24;
    throw tr::Error("unknown answer kind: " + kind);
}

int run_solve(const CommonOptions& opts, const std::string& question,
              const std::string& kind) {
    const auto templates = tr::PromptTemplateSet::defaults();
    auto backend = make_backend(opts, templates);
    tr::RunConfig config = opts.config;
    config.answer_kind = parse_kind(kind);

    const auto result = tr::run_question(question, config, *backend, templates);
    if (result.backend_error) {
        std::cerr << "backend error: " << result.error_message << "\n";
        return 1;
    }
    if (result.final_value)
        std::cout << "answer: " << tr::value_to_string(*result.final_value) << "\n";
    else
        std::cout << "answer: (none)\n";
    std::cout << "solutions: " << result.solutions.size()
              << "  paths: " << result.graph.path_count()
              << "  rollbacks: " << result.graph.rollback_count()
              << "  interactions: " << result.interactions
              << "  tokens: " << result.prompt_tokens << "+" << result.generated_tokens
              << (result.tokens_estimated ? " (estimated)" : "") << "\n";
    for (const auto& path : result.graph.paths()) {
        std::cout << "path " << path.id << (path.solved ? " [solved]" : "")
                  << (path.frozen ? " [frozen]" : "") << ":";
        for (auto node : path.nodes) std::cout << " " << node;
        std::cout << "\n";
    }
    if (!opts.out_dir.empty()) {
        fs::create_directories(opts.out_dir);
        std::ofstream json_out(fs::path(opts.out_dir) / "question.json");
        json_out << tr::graph_to_json_string(result.graph);
        std::ofstream dot_out(fs::path(opts.out_dir) / "question.dot");
        dot_out << tr::graph_to_dot(result.graph);
        std::cout << "graph written to " << opts.out_dir << "\n";
    }
    return 0;
}

int run_bench(const CommonOptions& opts, const std::string& dataset_path,
              const std::string& format_name) {
    if (opts.out_dir.empty()) throw tr::Error("bench requires --out");
    const tr::DatasetFormat format = format_name == "gsm8k"
                                         ? tr::DatasetFormat::Gsm8kNative
                                         : tr::DatasetFormat::Jsonl;
    const auto tasks = tr::load_dataset(dataset_path, format);
    const auto templates = tr::PromptTemplateSet::defaults();
    auto backend = make_backend(opts, templates);

    tr::RunRecordWriter writer(opts.out_dir, opts.config);
    std::vector<tr::QuestionRecord> records;
    for (const auto& task : tasks) {
        if (writer.completed_ids().count(task.id)) {
            std::cerr << task.id << ": already recorded, skipping\n";
            continue;
        }
        tr::RunConfig config = opts.config;
        config.answer_kind = task.kind;
        config.problem_name = task.problem_name;
        const auto result = tr::run_question(task.question, config, *backend, templates);
        const bool solved = !result.backend_error && result.final_value &&
                            tr::compare_answer(*result.final_value, task);
        writer.write_question(task.id, result, solved);

        tr::QuestionRecord record;
        record.id = task.id;
        record.solved = solved;
        record.interactions = result.interactions;
        record.prompt_tokens = result.prompt_tokens;
        record.generated_tokens = result.generated_tokens;
        record.tokens_estimated = result.tokens_estimated;
        records.push_back(std::move(record));
        std::cerr << task.id << ": " << (solved ? "solved" : "unsolved") << ", "
                  << result.interactions << " interactions\n";
        if (result.backend_error)
            std::cerr << task.id << ": backend error: " << result.error_message << "\n";
    }
    if (records.empty()) {
        std::cerr << "nothing to do\n";
        return 0;
    }
    const auto report = tr::aggregate_metrics(records);
    writer.write_report(report);
    std::cout << "solved " << report.solved << "/" << report.total << " ("
              << report.solve_rate << "%), mean interactions "
              << report.mean_interactions << " (stddev " << report.stddev_interactions
              << ")\n";
    return 0;
}

int run_export(const std::string& run_dir) {
    const fs::path graphs = fs::path(run_dir) / "graphs";
    if (!fs::is_directory(graphs))
        throw tr::Error("no graphs directory under " + run_dir);
    int exported = 0;
    for (const auto& entry : fs::directory_iterator(graphs)) {
        if (entry.path().extension() != ".json") continue;
        std::ifstream in(entry.path(), std::ios::binary);
        std::ostringstream text;
        text << in.rdbuf();
        const auto graph = tr::graph_from_json_string(text.str());
        fs::path dot_path = entry.path();
        dot_path.replace_extension(".dot");
        std::ofstream out(dot_path);
        out << tr::graph_to_dot(graph);
        ++exported;
    }
    std::cout << "exported " << exported << " graphs\n";
    return 0;
}

int run_simulate(const CommonOptions& opts, const std::vector<double>& p_values,
                 const std::vector<double>& r_values, const std::vector<double>& q_values,
                 int chain_length, int questions, std::uint64_t seed) {
    const auto templates = tr::PromptTemplateSet::defaults();
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!opts.out_dir.empty()) {
        fs::create_directories(opts.out_dir);
        file.open(fs::path(opts.out_dir) / "simulate.csv");
        out = &file;
    }
    *out << "p,r,q,chain_solve_rate,tr_solve_rate,tr_mean_interactions,"
            "tr_mean_rollbacks\n";
    for (double p : p_values)
        for (double r : r_values)
            for (double q : q_values) {
                tr::SyntheticModelParams params;
                params.step_error_prob = p;
                params.analyzer_recall = r;
                params.analyzer_false_positive = q;
                params.chain_length = chain_length;
                params.rng_seed = seed;
                tr::SyntheticBackend backend(params, templates.generation_system,
                                             templates.analysis_system);
                int chain_solved = 0;
                int tr_solved = 0;
                long interactions = 0;
                long rollbacks = 0;
                for (int i = 0; i < questions; ++i) {
                    const auto task = backend.make_task(i);
                    tr::RunConfig config = opts.config;
                    const auto chain =
                        tr::run_chain_baseline(task.question, config, backend, templates);
                    if (chain.final_value &&
                        tr::values_equal(*chain.final_value, task.ground_truth))
                        ++chain_solved;
                    const auto result =
                        tr::run_question(task.question, config, backend, templates);
                    if (result.final_value &&
                        tr::values_equal(*result.final_value, task.ground_truth))
                        ++tr_solved;
                    interactions += result.interactions;
                    rollbacks += static_cast<long>(result.graph.rollback_count());
                }
                *out << p << "," << r << "," << q << ","
                     << static_cast<double>(chain_solved) / questions << ","
                     << static_cast<double>(tr_solved) / questions << ","
                     << static_cast<double>(interactions) / questions << ","
                     << static_cast<double>(rollbacks) / questions << "\n";
                std::cerr << "p=" << p << " r=" << r << " q=" << q << " done\n";
            }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Thought-graph reasoning engine with rollback"};
    app.require_subcommand(1);

    CommonOptions opts;

    auto* solve = app.add_subcommand("solve", "Answer one question");
    std::string question;
    std::string kind = "numeric";
    solve->add_option("question", question, "Question text")->required();
    solve->add_option("--kind", kind, "Answer kind: numeric, multiple_choice, game24");
    add_common_flags(*solve, opts);

    auto* bench = app.add_subcommand("bench", "Run a dataset and write metrics");
    std::string dataset;
    std::string format = "jsonl";
    bench->add_option("--dataset", dataset, "Dataset file")->required();
    bench->add_option("--format", format, "Dataset format: jsonl or gsm8k");
    add_common_flags(*bench, opts);

    auto* exp = app.add_subcommand("export", "Rewrite DOT files from stored graphs");
    std::string run_dir;
    exp->add_option("--run", run_dir, "Run directory containing graphs/")->required();

    auto* simulate = app.add_subcommand("simulate", "Sweep the simulated model");
    std::vector<double> p_values{0.3};
    std::vector<double> r_values{1.0};
    std::vector<double> q_values{0.0};
    int chain_length = 6;
    int questions = 200;
    std::uint64_t seed = 0;
    simulate->add_option("--p", p_values, "Step error probabilities");
    simulate->add_option("--r", r_values, "Analyzer recall values");
    simulate->add_option("--q", q_values, "Analyzer false-positive rates");
    simulate->add_option("--chain-length", chain_length, "Steps per simulated question");
    simulate->add_option("--questions", questions, "Questions per grid point");
    simulate->add_option("--seed", seed, "Simulation seed");
    add_common_flags(*simulate, opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return run_solve(opts, question, kind);
        if (bench->parsed()) return run_bench(opts, dataset, format);
        if (exp->parsed()) return run_export(run_dir);
        if (simulate->parsed())
            return run_simulate(opts, p_values, r_values, q_values, chain_length,
                                questions, seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
