#include <doctest.h>

#include "tr/error.hpp"
#include "tr/graph.hpp"

#include <algorithm>
#include <random>
#include <set>

using tr::GraphLimits;
using tr::NodeId;
using tr::NodeKind;
using tr::PathId;
using tr::ThoughtGraph;

TEST_CASE("root creation and basic appends") {
    ThoughtGraph g;
    const NodeId root = g.add_root("What is 2+3?");
    CHECK(root == 0);
    CHECK(g.node(root).kind == NodeKind::Root);
    CHECK(g.node(root).step == 0);
    CHECK(g.path_count() == 1);
    CHECK(g.path(0).nodes == std::vector<NodeId>{root});

    const NodeId a = g.append_thought(0, "Step 1. Let x = 2.", false);
    const NodeId b = g.append_thought(0, "Step 2. The final solution is 5.", true);
    CHECK(g.node(a).step == 1);
    CHECK(g.node(b).step == 2);
    CHECK(g.node(b).kind == NodeKind::Solution);
    CHECK(g.path(0).terminal);
    CHECK(g.path(0).solved);
    CHECK(g.frontier(0) == b);
    CHECK(g.forward_edges().size() == 2);
}

TEST_CASE("add_root rejects empty question and double roots") {
    ThoughtGraph g;
    CHECK_THROWS_AS(g.add_root(""), tr::Error);
    g.add_root("q");
    CHECK_THROWS_AS(g.add_root("q"), tr::Error);
}

TEST_CASE("appending to a terminal or frozen path is rejected") {
    ThoughtGraph g;
    g.add_root("q");
    g.append_thought(0, "Step 1. The final solution is 1.", true);
    CHECK_THROWS_AS(g.append_thought(0, "more", false), tr::Error);

    ThoughtGraph h;
    h.add_root("q");
    h.freeze_path(0);
    CHECK_THROWS_AS(h.append_thought(0, "x", false), tr::Error);
}

TEST_CASE("paths terminate at the step limit") {
    GraphLimits limits;
    limits.max_steps = 3;
    ThoughtGraph g(limits);
    g.add_root("q");
    g.append_thought(0, "Step 1.", false);
    g.append_thought(0, "Step 2.", false);
    g.append_thought(0, "Step 3.", false);
    CHECK_FALSE(g.path(0).terminal);
    // Exceeding the bound fails and retires the path.
    CHECK_THROWS_AS(g.append_thought(0, "Step 4.", false), tr::Error);
    CHECK(g.path(0).terminal);
    CHECK_FALSE(g.path(0).solved);
}

TEST_CASE("rollback spawns a prefix path carrying one experience") {
    ThoughtGraph g;
    const NodeId root = g.add_root("q");
    const NodeId n1 = g.append_thought(0, "Step 1. a", false);
    const NodeId n2 = g.append_thought(0, "Step 2. b", false);
    const NodeId n3 = g.append_thought(0, "Step 3. c", false);

    const PathId p = g.spawn_rollback_path(n3, n1, "Step 2 is wrong.");
    CHECK(p == 1);
    CHECK(g.path(p).nodes == std::vector<NodeId>{root, n1});
    CHECK(g.path(p).pending_experience.has_value());
    CHECK(g.path(p).pending_experience->analysis_text == "Step 2 is wrong.");
    CHECK(g.node(n3).outgoing_rollbacks == 1);
    CHECK(g.node(n1).incoming_rollbacks == 1);
    CHECK(g.rollback_count() == 1);
    CHECK(g.rollback_edges().back().src == n3);
    CHECK(g.rollback_edges().back().dst == n1);

    // The experience attaches to the first thought appended on the new path.
    const NodeId n4 = g.append_thought(p, "Step 2. b'", false);
    CHECK(g.node(n4).experience.has_value());
    CHECK(g.node(n4).experience->origin_src == n3);
    CHECK_FALSE(g.path(p).pending_experience.has_value());
    const NodeId n5 = g.append_thought(p, "Step 3. c'", false);
    CHECK_FALSE(g.node(n5).experience.has_value());
    (void)n2;
}

TEST_CASE("rollback destination must be a proper ancestor") {
    ThoughtGraph g;
    const NodeId root = g.add_root("q");
    const NodeId n1 = g.append_thought(0, "Step 1.", false);
    g.spawn_rollback_path(n1, root, "bad");
    const NodeId n2 = g.append_thought(1, "Step 1. again", false);
    // n1 is on path 0, not an ancestor of n2.
    CHECK_THROWS_AS(g.spawn_rollback_path(n2, n1, "x"), tr::Error);
    CHECK_THROWS_AS(g.spawn_rollback_path(n2, n2, "x"), tr::Error);
}

TEST_CASE("incoming and outgoing rollback caps are enforced") {
    GraphLimits limits; // defaults: 3 incoming, 3 outgoing per thought
    ThoughtGraph g(limits);
    const NodeId root = g.add_root("q");
    g.append_thought(0, "Step 1.", false);
    const NodeId src = g.frontier(0);
    g.spawn_rollback_path(src, root, "a");
    g.spawn_rollback_path(src, root, "b");
    g.spawn_rollback_path(src, root, "c");
    CHECK(g.node(root).incoming_rollbacks == 3);
    CHECK(g.node(src).outgoing_rollbacks == 3);
    CHECK_THROWS_AS(g.spawn_rollback_path(src, root, "d"), tr::Error);
}

TEST_CASE("per-path trigger counter freezes the path at the cap") {
    ThoughtGraph g;
    g.add_root("q");
    for (int i = 1; i <= 4; ++i) CHECK(g.record_outgoing_trigger(0) == i);
    CHECK_FALSE(g.path(0).frozen);
    CHECK(g.record_outgoing_trigger(0) == 5);
    CHECK(g.path(0).frozen);
}

TEST_CASE("experiences accumulate along rollback lineage in ordinal order") {
    ThoughtGraph g;
    const NodeId root = g.add_root("q");
    g.append_thought(0, "Step 1.", false);
    const NodeId n1 = g.frontier(0);
    const PathId p1 = g.spawn_rollback_path(n1, root, "first");
    g.append_thought(p1, "Step 1. v2", false);
    const NodeId n2 = g.frontier(p1);
    const PathId p2 = g.spawn_rollback_path(n2, root, "second");

    // p2 has the pending "second" plus nothing attached yet; after appending,
    // its frontier carries "second" and the prefix carries no experience
    // because p2 branches from the root.
    auto exps = g.path_experiences(p2);
    REQUIRE(exps.size() == 1);
    CHECK(exps[0].analysis_text == "second");
    CHECK(exps[0].ordinal == 1);

    // Rolling back from deeper in p1 keeps the attached experience in the prefix.
    g.append_thought(p1, "Step 2. more", false);
    const NodeId n3 = g.frontier(p1);
    const PathId p3 = g.spawn_rollback_path(n3, n2, "third");
    exps = g.path_experiences(p3);
    REQUIRE(exps.size() == 2);
    CHECK(exps[0].analysis_text == "first");
    CHECK(exps[1].analysis_text == "third");
    CHECK(exps[0].ordinal < exps[1].ordinal);
}

TEST_CASE("alpha beta scores count rollbacks and experiences on the path") {
    ThoughtGraph g;
    const NodeId root = g.add_root("q");
    g.append_thought(0, "Step 1.", false);
    const NodeId n1 = g.frontier(0);
    const PathId p1 = g.spawn_rollback_path(n1, root, "a");
    g.append_thought(p1, "Step 1. v2", false);

    const auto s0 = g.path_alpha_beta(0);
    CHECK(s0.alpha == 1); // n1 triggered one rollback
    CHECK(s0.beta == 0);
    const auto s1 = g.path_alpha_beta(p1);
    CHECK(s1.alpha == 0);
    CHECK(s1.beta == 1); // frontier carries the experience
}

TEST_CASE("path step texts exclude the root") {
    ThoughtGraph g;
    g.add_root("q");
    g.append_thought(0, "Step 1. a", false);
    g.append_thought(0, "Step 2. b", false);
    CHECK(g.path_step_texts(0) == std::vector<std::string>{"Step 1. a", "Step 2. b"});
}

TEST_CASE("randomized operation sequences preserve structural invariants") {
    std::mt19937 rng(20240817);
    for (int trial = 0; trial < 500; ++trial) {
        ThoughtGraph g;
        g.add_root("q" + std::to_string(trial));
        for (int op = 0; op < 40; ++op) {
            // Pick a live path uniformly, then either extend it or roll back.
            std::vector<PathId> live;
            for (const auto& p : g.paths())
                if (!p.frozen && !p.terminal) live.push_back(p.id);
            if (live.empty()) break;
            const PathId pid = live[rng() % live.size()];
            const auto& path = g.path(pid);
            const bool try_rollback = path.nodes.size() > 1 && rng() % 3 == 0;
            if (try_rollback) {
                const NodeId src = path.nodes.back();
                const NodeId dst = path.nodes[rng() % (path.nodes.size() - 1)];
                const bool src_capped =
                    g.node(src).outgoing_rollbacks >= g.limits().outgoing_per_thought;
                const bool dst_capped =
                    g.node(dst).incoming_rollbacks >= g.limits().incoming_cap;
                if (src_capped || dst_capped) {
                    CHECK_THROWS_AS(g.spawn_rollback_path(src, dst, "x"), tr::Error);
                } else {
                    g.spawn_rollback_path(src, dst, "x");
                    g.record_outgoing_trigger(pid);
                }
            } else if (g.node(path.nodes.back()).step >= g.limits().max_steps) {
                g.mark_terminal(pid); // depth bound reached
            } else {
                const bool solution = rng() % 8 == 0;
                g.append_thought(pid, "Step t", solution);
            }
        }

        // Invariants.
        CHECK(g.path_count() == g.rollback_count() + 1);
        CHECK(g.forward_edges().size() == g.node_count() - 1);
        for (const auto& p : g.paths()) {
            REQUIRE_FALSE(p.nodes.empty());
            CHECK(g.node(p.nodes.front()).kind == NodeKind::Root);
            for (std::size_t i = 0; i < p.nodes.size(); ++i) {
                CHECK(g.node(p.nodes[i]).step == static_cast<int>(i));
                if (i) CHECK(g.is_ancestor(p.nodes[i - 1], p.nodes[i]));
            }
            CHECK(static_cast<int>(p.nodes.size()) - 1 <= g.limits().max_steps);
        }
        for (const auto& n : g.nodes()) {
            CHECK(n.incoming_rollbacks <= g.limits().incoming_cap);
            CHECK(n.outgoing_rollbacks <= g.limits().outgoing_per_thought);
        }
        for (const auto& e : g.rollback_edges()) {
            CHECK(g.is_ancestor(e.dst, e.src));
            CHECK(e.dst != e.src);
        }
        // Experience ordinals are unique and dense over attached+pending.
        std::set<int> ordinals;
        for (const auto& n : g.nodes())
            if (n.experience) ordinals.insert(n.experience->ordinal);
        for (const auto& p : g.paths())
            if (p.pending_experience) ordinals.insert(p.pending_experience->ordinal);
        CHECK(ordinals.size() == g.rollback_count());
        if (!ordinals.empty()) {
            CHECK(*ordinals.begin() == 0);
            CHECK(*ordinals.rbegin() == static_cast<int>(ordinals.size()) - 1);
        }
    }
}
