#pragma once

#include "tr/graph.hpp"

#include <json.hpp>

#include <string>

namespace tr {

// Canonical graph serialization: fixed key order, lossless round-trip.
nlohmann::ordered_json graph_to_json(const ThoughtGraph& graph);
std::string graph_to_json_string(const ThoughtGraph& graph);
ThoughtGraph graph_from_json(const nlohmann::json& doc);
ThoughtGraph graph_from_json_string(const std::string& text);

// DOT export: nodes labeled "N-<ordinal> S-<step>", forward edges solid,
// rollback edges dashed with a "rollback" label, solution nodes boxed.
std::string graph_to_dot(const ThoughtGraph& graph);

} // namespace tr
