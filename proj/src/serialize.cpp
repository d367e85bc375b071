#include "tr/serialize.hpp"

#include "tr/error.hpp"

#include <sstream>

namespace tr {

namespace {

const char* kind_name(NodeKind kind) {
    switch (kind) {
    case NodeKind::Root: return "root";
    case NodeKind::Intermediate: return "intermediate";
    case NodeKind::Solution: return "solution";
    }
    return "intermediate";
}

NodeKind kind_from_name(const std::string& name) {
    if (name == "root") return NodeKind::Root;
    if (name == "intermediate") return NodeKind::Intermediate;
    if (name == "solution") return NodeKind::Solution;
    throw Error("unknown node kind: " + name);
}

nlohmann::ordered_json experience_to_json(const Experience& exp) {
    return {{"origin_src", exp.origin_src},
            {"origin_dst", exp.origin_dst},
            {"analysis_text", exp.analysis_text},
            {"ordinal", exp.ordinal}};
}

Experience experience_from_json(const nlohmann::json& doc) {
    Experience exp;
    exp.origin_src = doc.at("origin_src").get<NodeId>();
    exp.origin_dst = doc.at("origin_dst").get<NodeId>();
    exp.analysis_text = doc.at("analysis_text").get<std::string>();
    exp.ordinal = doc.at("ordinal").get<int>();
    return exp;
}

} // namespace

nlohmann::ordered_json graph_to_json(const ThoughtGraph& graph) {
    nlohmann::ordered_json doc;
    doc["limits"] = {{"incoming_cap", graph.limits().incoming_cap},
                     {"outgoing_per_thought", graph.limits().outgoing_per_thought},
                     {"outgoing_per_path", graph.limits().outgoing_per_path},
                     {"max_steps", graph.limits().max_steps}};
    doc["next_experience_ordinal"] = graph.next_experience_ordinal();

    auto nodes = nlohmann::ordered_json::array();
    for (const auto& n : graph.nodes()) {
        nlohmann::ordered_json node;
        node["id"] = n.id;
        node["step"] = n.step;
        node["kind"] = kind_name(n.kind);
        node["content"] = n.content;
        node["outgoing_rollbacks"] = n.outgoing_rollbacks;
        node["incoming_rollbacks"] = n.incoming_rollbacks;
        if (n.experience) node["experience"] = experience_to_json(*n.experience);
        nodes.push_back(std::move(node));
    }
    doc["nodes"] = std::move(nodes);

    auto forward = nlohmann::ordered_json::array();
    for (const auto& e : graph.forward_edges())
        forward.push_back({{"src", e.src}, {"dst", e.dst}});
    doc["forward_edges"] = std::move(forward);

    auto rollback = nlohmann::ordered_json::array();
    for (const auto& e : graph.rollback_edges())
        rollback.push_back({{"src", e.src}, {"dst", e.dst}, {"analysis", e.analysis}});
    doc["rollback_edges"] = std::move(rollback);

    auto paths = nlohmann::ordered_json::array();
    for (const auto& p : graph.paths()) {
        nlohmann::ordered_json path;
        path["id"] = p.id;
        path["nodes"] = p.nodes;
        path["frozen"] = p.frozen;
        path["terminal"] = p.terminal;
        path["solved"] = p.solved;
        path["triggered_rollbacks"] = p.triggered_rollbacks;
        if (p.pending_experience)
            path["pending_experience"] = experience_to_json(*p.pending_experience);
        paths.push_back(std::move(path));
    }
    doc["paths"] = std::move(paths);
    return doc;
}

std::string graph_to_json_string(const ThoughtGraph& graph) {
    return graph_to_json(graph).dump(2) + "\n";
}

ThoughtGraph graph_from_json(const nlohmann::json& doc) {
    GraphLimits limits;
    const auto& l = doc.at("limits");
    limits.incoming_cap = l.at("incoming_cap").get<int>();
    limits.outgoing_per_thought = l.at("outgoing_per_thought").get<int>();
    limits.outgoing_per_path = l.at("outgoing_per_path").get<int>();
    limits.max_steps = l.at("max_steps").get<int>();

    std::vector<ThoughtNode> nodes;
    for (const auto& entry : doc.at("nodes")) {
        ThoughtNode n;
        n.id = entry.at("id").get<NodeId>();
        n.step = entry.at("step").get<int>();
        n.kind = kind_from_name(entry.at("kind").get<std::string>());
        n.content = entry.at("content").get<std::string>();
        n.outgoing_rollbacks = entry.at("outgoing_rollbacks").get<int>();
        n.incoming_rollbacks = entry.at("incoming_rollbacks").get<int>();
        if (entry.contains("experience"))
            n.experience = experience_from_json(entry.at("experience"));
        nodes.push_back(std::move(n));
    }

    std::vector<ForwardEdge> forward;
    for (const auto& entry : doc.at("forward_edges"))
        forward.push_back({entry.at("src").get<NodeId>(), entry.at("dst").get<NodeId>()});

    std::vector<RollbackEdge> rollback;
    for (const auto& entry : doc.at("rollback_edges"))
        rollback.push_back({entry.at("src").get<NodeId>(), entry.at("dst").get<NodeId>(),
                            entry.at("analysis").get<std::string>()});

    std::vector<ReasoningPath> paths;
    for (const auto& entry : doc.at("paths")) {
        ReasoningPath p;
        p.id = entry.at("id").get<PathId>();
        p.nodes = entry.at("nodes").get<std::vector<NodeId>>();
        p.frozen = entry.at("frozen").get<bool>();
        p.terminal = entry.at("terminal").get<bool>();
        p.solved = entry.at("solved").get<bool>();
        p.triggered_rollbacks = entry.at("triggered_rollbacks").get<int>();
        if (entry.contains("pending_experience"))
            p.pending_experience = experience_from_json(entry.at("pending_experience"));
        paths.push_back(std::move(p));
    }

    return ThoughtGraph::restore(limits, std::move(nodes), std::move(forward),
                                 std::move(rollback), std::move(paths),
                                 doc.at("next_experience_ordinal").get<int>());
}

ThoughtGraph graph_from_json_string(const std::string& text) {
    return graph_from_json(nlohmann::json::parse(text));
}

std::string graph_to_dot(const ThoughtGraph& graph) {
    if (graph.empty()) throw Error("cannot export an empty graph");
    std::ostringstream out;
    out << "digraph thoughts {\n";
    out << "  rankdir=TB;\n";
    for (const auto& n : graph.nodes()) {
        out << "  n" << n.id << " [label=\"N-" << n.id << " S-" << n.step << "\"";
        if (n.kind == NodeKind::Solution) out << " shape=box style=filled fillcolor=lightblue";
        else if (n.kind == NodeKind::Root) out << " shape=doublecircle";
        out << "];\n";
    }
    for (const auto& e : graph.forward_edges())
        out << "  n" << e.src << " -> n" << e.dst << ";\n";
    for (const auto& e : graph.rollback_edges())
        out << "  n" << e.src << " -> n" << e.dst
            << " [style=dashed label=\"rollback\"];\n";
    out << "}\n";
    return out.str();
}

} // namespace tr
