#include "tr/graph.hpp"

#include "tr/error.hpp"

#include <algorithm>

namespace tr {

ThoughtGraph::ThoughtGraph(GraphLimits limits) : limits_(limits) {}

const ThoughtNode& ThoughtGraph::node(NodeId id) const {
    if (id >= nodes_.size()) throw Error("unknown node id " + std::to_string(id));
    return nodes_[id];
}

const ReasoningPath& ThoughtGraph::path(PathId id) const {
    if (id >= paths_.size()) throw Error("unknown path id " + std::to_string(id));
    return paths_[id];
}

ReasoningPath& ThoughtGraph::path_mut(PathId id) {
    if (id >= paths_.size()) throw Error("unknown path id " + std::to_string(id));
    return paths_[id];
}

NodeId ThoughtGraph::frontier(PathId id) const {
    const auto& p = path(id);
    return p.nodes.back();
}

NodeId ThoughtGraph::add_root(const std::string& question) {
    if (!nodes_.empty()) throw Error("root already exists");
    if (question.empty()) throw Error("empty question");
    ThoughtNode root;
    root.id = 0;
    root.step = 0;
    root.content = question;
    root.kind = NodeKind::Root;
    nodes_.push_back(std::move(root));
    forward_parent_.push_back(0);

    ReasoningPath p;
    p.id = 0;
    p.nodes = {0};
    paths_.push_back(std::move(p));
    return 0;
}

NodeId ThoughtGraph::append_thought(PathId path_id, const std::string& content,
                                    bool is_solution) {
    auto& p = path_mut(path_id);
    if (p.frozen) throw Error("path is frozen");
    if (p.terminal) throw Error("path is terminal");

    const NodeId parent = p.nodes.back();
    const int step = nodes_[parent].step + 1;
    if (step > limits_.max_steps) {
        p.terminal = true;
        throw Error("max steps exceeded");
    }

    ThoughtNode n;
    n.id = static_cast<NodeId>(nodes_.size());
    n.step = step;
    n.content = content;
    n.kind = is_solution ? NodeKind::Solution : NodeKind::Intermediate;
    if (p.pending_experience) {
        n.experience = std::move(p.pending_experience);
        p.pending_experience.reset();
    }
    nodes_.push_back(std::move(n));
    forward_parent_.push_back(parent);
    forward_edges_.push_back({parent, static_cast<NodeId>(nodes_.size() - 1)});
    p.nodes.push_back(static_cast<NodeId>(nodes_.size() - 1));
    if (is_solution) {
        p.terminal = true;
        p.solved = true;
    }
    return static_cast<NodeId>(nodes_.size() - 1);
}

bool ThoughtGraph::is_ancestor(NodeId ancestor, NodeId node_id) const {
    if (ancestor >= nodes_.size() || node_id >= nodes_.size()) return false;
    NodeId cur = node_id;
    while (true) {
        if (cur == ancestor) return true;
        NodeId parent = forward_parent_[cur];
        if (parent == cur) return false; // reached a root
        cur = parent;
    }
}

PathId ThoughtGraph::spawn_rollback_path(NodeId src, NodeId dst,
                                         const std::string& analysis) {
    const auto& s = node(src);
    const auto& d = node(dst);
    if (d.step >= s.step) throw Error("rollback destination must precede source");
    if (!is_ancestor(dst, src)) throw Error("destination is not an ancestor of source");
    if (d.incoming_rollbacks >= limits_.incoming_cap)
        throw Error("destination incoming-rollback cap reached");
    if (s.outgoing_rollbacks >= limits_.outgoing_per_thought)
        throw Error("source outgoing-rollback cap reached");

    // Root-to-dst prefix along forward parents.
    std::vector<NodeId> prefix;
    for (NodeId cur = dst;; cur = forward_parent_[cur]) {
        prefix.push_back(cur);
        if (forward_parent_[cur] == cur) break;
    }
    std::reverse(prefix.begin(), prefix.end());

    nodes_[src].outgoing_rollbacks += 1;
    nodes_[dst].incoming_rollbacks += 1;
    rollback_edges_.push_back({src, dst, analysis});

    ReasoningPath p;
    p.id = static_cast<PathId>(paths_.size());
    p.nodes = std::move(prefix);
    Experience exp;
    exp.origin_src = src;
    exp.origin_dst = dst;
    exp.analysis_text = analysis;
    exp.ordinal = next_experience_ordinal_++;
    p.pending_experience = std::move(exp);
    paths_.push_back(std::move(p));
    return static_cast<PathId>(paths_.size() - 1);
}

std::vector<Experience> ThoughtGraph::path_experiences(PathId path_id) const {
    const auto& p = path(path_id);
    std::vector<Experience> out;
    for (NodeId id : p.nodes) {
        if (nodes_[id].experience) out.push_back(*nodes_[id].experience);
    }
    std::sort(out.begin(), out.end(),
              [](const Experience& a, const Experience& b) { return a.ordinal < b.ordinal; });
    if (p.pending_experience) out.push_back(*p.pending_experience);
    return out;
}

PathScore ThoughtGraph::path_alpha_beta(PathId path_id) const {
    const auto& p = path(path_id);
    PathScore score;
    for (NodeId id : p.nodes) {
        score.alpha += nodes_[id].outgoing_rollbacks;
        if (nodes_[id].experience) score.beta += 1;
    }
    return score;
}

std::vector<std::string> ThoughtGraph::path_step_texts(PathId path_id) const {
    const auto& p = path(path_id);
    std::vector<std::string> out;
    for (NodeId id : p.nodes) {
        if (nodes_[id].kind == NodeKind::Root) continue;
        out.push_back(nodes_[id].content);
    }
    return out;
}

void ThoughtGraph::freeze_path(PathId path_id) { path_mut(path_id).frozen = true; }

void ThoughtGraph::mark_terminal(PathId path_id) { path_mut(path_id).terminal = true; }

int ThoughtGraph::record_outgoing_trigger(PathId path_id) {
    auto& p = path_mut(path_id);
    p.triggered_rollbacks += 1;
    if (p.triggered_rollbacks >= limits_.outgoing_per_path) p.frozen = true;
    return p.triggered_rollbacks;
}

void ThoughtGraph::rebuild_parents() {
    forward_parent_.assign(nodes_.size(), 0);
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        forward_parent_[i] = static_cast<NodeId>(i);
    for (const auto& e : forward_edges_) forward_parent_[e.dst] = e.src;
}

ThoughtGraph ThoughtGraph::restore(GraphLimits limits,
                                   std::vector<ThoughtNode> nodes,
                                   std::vector<ForwardEdge> forward_edges,
                                   std::vector<RollbackEdge> rollback_edges,
                                   std::vector<ReasoningPath> paths,
                                   int next_experience_ordinal) {
    ThoughtGraph g(limits);
    g.nodes_ = std::move(nodes);
    g.forward_edges_ = std::move(forward_edges);
    g.rollback_edges_ = std::move(rollback_edges);
    g.paths_ = std::move(paths);
    g.next_experience_ordinal_ = next_experience_ordinal;
    g.rebuild_parents();
    return g;
}

} // namespace tr
