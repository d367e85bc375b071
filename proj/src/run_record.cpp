#include "tr/run_record.hpp"

#include "tr/error.hpp"
#include "tr/serialize.hpp"

namespace tr {

namespace fs = std::filesystem;

nlohmann::ordered_json run_result_to_json(const std::string& id, const RunResult& result,
                                          bool solved) {
    nlohmann::ordered_json doc;
    doc["id"] = id;
    doc["solved"] = solved;
    doc["voted"] = result.final_value ? value_to_string(*result.final_value) : "";
    doc["solutions"] = result.solutions.size();
    doc["paths"] = result.graph.path_count();
    doc["rollbacks"] = result.graph.rollback_count();
    doc["interactions"] = result.interactions;
    doc["prompt_tokens"] = result.prompt_tokens;
    doc["generated_tokens"] = result.generated_tokens;
    doc["tokens_estimated"] = result.tokens_estimated;
    doc["backend_error"] = result.backend_error;
    if (result.backend_error) doc["error_message"] = result.error_message;
    doc["graph_json"] = "graphs/" + id + ".json";
    auto calls = nlohmann::ordered_json::array();
    for (const auto& call : result.calls)
        calls.push_back({{"role", call.role},
                         {"digest", call.prompt_digest},
                         {"prompt_tokens", call.prompt_tokens},
                         {"generated_tokens", call.generated_tokens}});
    doc["calls"] = std::move(calls);
    return doc;
}

nlohmann::ordered_json metrics_report_to_json(const MetricsReport& report) {
    nlohmann::ordered_json doc;
    doc["note"] = "stddev values are population standard deviations";
    doc["total"] = report.total;
    doc["solved"] = report.solved;
    doc["solve_rate"] = report.solve_rate;
    doc["interactions"] = {{"mean", report.mean_interactions},
                           {"stddev", report.stddev_interactions}};
    doc["prompt_tokens"] = {{"mean", report.mean_prompt_tokens},
                            {"stddev", report.stddev_prompt_tokens}};
    doc["generated_tokens"] = {{"mean", report.mean_generated_tokens},
                               {"stddev", report.stddev_generated_tokens}};
    doc["tokens_estimated"] = report.any_tokens_estimated;
    return doc;
}

RunRecordWriter::RunRecordWriter(const fs::path& out_dir, const RunConfig& config)
    : out_dir_(out_dir) {
    fs::create_directories(out_dir_ / "graphs");

    const fs::path run_path = out_dir_ / "run.jsonl";
    if (fs::exists(run_path)) {
        std::ifstream existing(run_path);
        std::string line;
        while (std::getline(existing, line)) {
            if (line.empty()) continue;
            try {
                completed_ids_.insert(
                    nlohmann::json::parse(line).at("id").get<std::string>());
            } catch (const nlohmann::json::exception&) {
                // a torn trailing line from an interrupted run is rerun
            }
        }
    }

    run_file_.open(run_path, std::ios::app);
    if (!run_file_) throw Error("cannot open run record: " + run_path.string());

    // Config snapshot, written once per fresh run directory.
    const fs::path config_path = out_dir_ / "config.json";
    if (!fs::exists(config_path)) {
        nlohmann::ordered_json snapshot;
        snapshot["k"] = config.k;
        snapshot["u"] = config.u;
        snapshot["max_outgoing_per_thought"] = config.max_outgoing_per_thought;
        snapshot["max_outgoing_per_path"] = config.max_outgoing_per_path;
        snapshot["max_steps"] = config.max_steps;
        snapshot["temperature"] = config.temperature;
        snapshot["top_p"] = config.top_p;
        snapshot["parallel"] = config.parallel;
        snapshot["structured_verdicts"] = config.structured_verdicts;
        snapshot["problem_name"] = config.problem_name;
        snapshot["model"] = config.model;
        std::ofstream out(config_path);
        out << snapshot.dump(2) << "\n";
    }
}

fs::path RunRecordWriter::graph_json_path(const std::string& id) const {
    return out_dir_ / "graphs" / (id + ".json");
}

fs::path RunRecordWriter::graph_dot_path(const std::string& id) const {
    return out_dir_ / "graphs" / (id + ".dot");
}

void RunRecordWriter::write_question(const std::string& id, const RunResult& result,
                                     bool solved) {
    {
        std::ofstream graph_out(graph_json_path(id));
        graph_out << graph_to_json_string(result.graph);
    }
    {
        std::ofstream dot_out(graph_dot_path(id));
        dot_out << graph_to_dot(result.graph);
    }
    run_file_ << run_result_to_json(id, result, solved).dump() << "\n";
    run_file_.flush();
    completed_ids_.insert(id);
}

void RunRecordWriter::write_report(const MetricsReport& report) {
    std::ofstream out(out_dir_ / "report.json");
    out << metrics_report_to_json(report).dump(2) << "\n";
}

} // namespace tr
