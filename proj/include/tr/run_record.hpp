#pragma once

#include "tr/engine.hpp"
#include "tr/harness.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <set>
#include <string>

namespace tr {

// Incremental run persistence: one run.jsonl line per completed question,
// the serialized graph and its DOT rendering under graphs/, and report.json
// with the aggregate metrics. Interrupted runs resume by skipping question
// ids already present in run.jsonl.
class RunRecordWriter {
public:
    RunRecordWriter(const std::filesystem::path& out_dir, const RunConfig& config);

    // Ids already recorded by a previous (interrupted) run in the same
    // directory.
    const std::set<std::string>& completed_ids() const { return completed_ids_; }

    void write_question(const std::string& id, const RunResult& result, bool solved);
    void write_report(const MetricsReport& report);

    std::filesystem::path graph_json_path(const std::string& id) const;
    std::filesystem::path graph_dot_path(const std::string& id) const;

private:
    std::filesystem::path out_dir_;
    std::ofstream run_file_;
    std::set<std::string> completed_ids_;
};

nlohmann::ordered_json run_result_to_json(const std::string& id, const RunResult& result,
                                          bool solved);
nlohmann::ordered_json metrics_report_to_json(const MetricsReport& report);

} // namespace tr
