#include <doctest.h>

#include "tr/engine.hpp"
#include "tr/prompts.hpp"
#include "tr/run_record.hpp"
#include "tr/synthetic.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct TempDir {
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() / ("tr_run_record_" + std::to_string(++counter));
        fs::remove_all(path);
    }
    ~TempDir() { fs::remove_all(path); }
    fs::path path;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

tr::RunResult sample_result() {
    tr::SyntheticModelParams params;
    params.chain_length = 3;
    const auto t = tr::PromptTemplateSet::defaults();
    tr::SyntheticBackend backend(params, t.generation_system, t.analysis_system);
    tr::RunConfig config;
    config.k = 1;
    return tr::run_question(backend.make_task(0).question, config, backend);
}

} // namespace

TEST_CASE("run records land on disk and resume skips finished questions") {
    TempDir dir;
    const auto result = sample_result();
    {
        tr::RunRecordWriter writer(dir.path, tr::RunConfig{});
        CHECK(writer.completed_ids().empty());
        writer.write_question("q0", result, true);
        CHECK(writer.completed_ids().count("q0") == 1);
    }
    CHECK(fs::exists(dir.path / "run.jsonl"));
    CHECK(fs::exists(dir.path / "config.json"));
    CHECK(fs::exists(dir.path / "graphs" / "q0.json"));
    CHECK(fs::exists(dir.path / "graphs" / "q0.dot"));

    // Reopening the directory recovers the finished set and appends.
    tr::RunRecordWriter resumed(dir.path, tr::RunConfig{});
    CHECK(resumed.completed_ids().count("q0") == 1);
    resumed.write_question("q1", result, false);
    std::istringstream lines(slurp(dir.path / "run.jsonl"));
    std::string line;
    int count = 0;
    while (std::getline(lines, line))
        if (!line.empty()) ++count;
    CHECK(count == 2);
}

TEST_CASE("a torn trailing line is ignored and the question rerun") {
    TempDir dir;
    fs::create_directories(dir.path);
    {
        std::ofstream out(dir.path / "run.jsonl");
        out << R"({"id": "done"})"
            << "\n"
            << R"({"id": "torn)"; // interrupted mid-write
    }
    tr::RunRecordWriter writer(dir.path, tr::RunConfig{});
    CHECK(writer.completed_ids().count("done") == 1);
    CHECK(writer.completed_ids().size() == 1);
}

TEST_CASE("question records carry no wall-clock fields and serialize stably") {
    const auto result = sample_result();
    const auto doc = tr::run_result_to_json("q7", result, true);
    CHECK(doc.at("id") == "q7");
    CHECK(doc.at("solved") == true);
    CHECK(doc.at("interactions").get<long>() == result.interactions);
    CHECK(doc.at("calls").size() == result.calls.size());
    const std::string dumped = doc.dump();
    for (const char* banned : {"time", "date", "stamp"})
        CHECK(dumped.find(banned) == std::string::npos);
    // Two serializations of equal results are byte-identical.
    CHECK(dumped == tr::run_result_to_json("q7", result, true).dump());
}

TEST_CASE("metrics report serializes the aggregate fields") {
    std::vector<tr::QuestionRecord> records(2);
    records[0].solved = true;
    records[0].interactions = 4;
    records[1].interactions = 8;
    const auto doc = tr::metrics_report_to_json(tr::aggregate_metrics(records));
    CHECK(doc.at("total") == 2);
    CHECK(doc.at("solved") == 1);
    CHECK(doc.at("solve_rate").get<double>() == doctest::Approx(50.0));
    CHECK(doc.at("interactions").at("mean").get<double>() == doctest::Approx(6.0));
}
