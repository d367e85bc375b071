#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tr {

using NodeId = std::uint32_t;
using PathId = std::uint32_t;

enum class NodeKind { Root, Intermediate, Solution };

// Error analysis attached to the first thought generated on a rollback-spawned
// path. Ordinals follow global creation order.
struct Experience {
    NodeId origin_src = 0;
    NodeId origin_dst = 0;
    std::string analysis_text;
    int ordinal = 0;
};

struct ThoughtNode {
    NodeId id = 0;
    int step = 0; // 0 = root/question
    std::string content;
    NodeKind kind = NodeKind::Intermediate;
    std::optional<Experience> experience;
    int outgoing_rollbacks = 0;
    int incoming_rollbacks = 0;
};

struct ForwardEdge {
    NodeId src = 0;
    NodeId dst = 0;
};

struct RollbackEdge {
    NodeId src = 0;
    NodeId dst = 0;
    std::string analysis;
};

struct ReasoningPath {
    PathId id = 0;
    std::vector<NodeId> nodes; // root to frontier, forward-connected
    bool frozen = false;
    bool terminal = false;
    bool solved = false; // terminal with a solution frontier
    // Experience created by the rollback that spawned this path; attached to
    // the next appended node and cleared.
    std::optional<Experience> pending_experience;
    // Rollbacks triggered by thoughts generated on this path.
    int triggered_rollbacks = 0;
};

struct PathScore {
    int alpha = 0; // sum of outgoing rollback counters over path nodes
    int beta = 0;  // experience-carrying nodes on the path
};

struct GraphLimits {
    int incoming_cap = 3;          // U
    int outgoing_per_thought = 3;
    int outgoing_per_path = 5;
    int max_steps = 12;
};

// Directed-cyclic structure of thoughts: forward edges form a forest of
// chains rooted at step 0, rollback edges point from a thought back to one
// of its ancestors. Every applied rollback spawns exactly one new path.
class ThoughtGraph {
public:
    explicit ThoughtGraph(GraphLimits limits = {});

    NodeId add_root(const std::string& question);
    NodeId append_thought(PathId path, const std::string& content, bool is_solution);
    PathId spawn_rollback_path(NodeId src, NodeId dst, const std::string& analysis);

    std::vector<Experience> path_experiences(PathId path) const;
    PathScore path_alpha_beta(PathId path) const;

    // Step texts of a path, root excluded, in path order.
    std::vector<std::string> path_step_texts(PathId path) const;

    bool is_ancestor(NodeId ancestor, NodeId node) const;

    void freeze_path(PathId path);
    void mark_terminal(PathId path);
    // Bumps the path's triggered-rollback counter; freezes the path once it
    // reaches the per-path cap. Returns the new count.
    int record_outgoing_trigger(PathId path);

    bool empty() const { return nodes_.empty(); }
    std::size_t node_count() const { return nodes_.size(); }
    std::size_t path_count() const { return paths_.size(); }
    std::size_t rollback_count() const { return rollback_edges_.size(); }

    const ThoughtNode& node(NodeId id) const;
    const ReasoningPath& path(PathId id) const;
    const std::vector<ThoughtNode>& nodes() const { return nodes_; }
    const std::vector<ReasoningPath>& paths() const { return paths_; }
    const std::vector<ForwardEdge>& forward_edges() const { return forward_edges_; }
    const std::vector<RollbackEdge>& rollback_edges() const { return rollback_edges_; }
    const GraphLimits& limits() const { return limits_; }
    int next_experience_ordinal() const { return next_experience_ordinal_; }

    NodeId frontier(PathId path) const;

    // Restores a previously serialized graph; performs no validation beyond
    // basic index checks.
    static ThoughtGraph restore(GraphLimits limits,
                                std::vector<ThoughtNode> nodes,
                                std::vector<ForwardEdge> forward_edges,
                                std::vector<RollbackEdge> rollback_edges,
                                std::vector<ReasoningPath> paths,
                                int next_experience_ordinal);

private:
    GraphLimits limits_;
    std::vector<ThoughtNode> nodes_;
    std::vector<ReasoningPath> paths_;
    std::vector<ForwardEdge> forward_edges_;
    std::vector<RollbackEdge> rollback_edges_;
    std::vector<NodeId> forward_parent_; // index by node id; self for root
    int next_experience_ordinal_ = 0;

    ReasoningPath& path_mut(PathId id);
    void rebuild_parents();
};

} // namespace tr
