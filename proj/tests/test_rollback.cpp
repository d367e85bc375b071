#include <doctest.h>

#include "tr/rollback.hpp"

#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace {

// Reference implementation: try bad steps in increasing order, take the first
// whose destination (step - 1) still has capacity.
std::optional<int> reference_destination(const std::set<int>& bad_steps,
                                         const std::map<int, int>& incoming_counts,
                                         int u) {
    std::vector<int> sorted(bad_steps.begin(), bad_steps.end());
    std::sort(sorted.begin(), sorted.end());
    for (int m : sorted) {
        if (m < 1) continue;
        int count = 0;
        if (auto it = incoming_counts.find(m - 1); it != incoming_counts.end())
            count = it->second;
        if (count < u) return m - 1;
    }
    return std::nullopt;
}

} // namespace

TEST_CASE("free-text analysis flags steps named in error sentences") {
    const std::string text =
        "Step 1 is correct. Step 2 is wrong because the subtraction is reversed. "
        "Step 3 looks fine. The 4-th step contains a mistake.";
    const auto a = tr::parse_bad_steps(text, 5);
    CHECK(a.bad_steps == std::set<int>{2, 4});
    CHECK(a.n_steps == 5);
}

TEST_CASE("negated error phrasing does not flag") {
    CHECK(tr::parse_bad_steps("Step 2 has no error. Step 3 is not wrong.", 4)
              .bad_steps.empty());
    CHECK(tr::parse_bad_steps("The reasoning is error-free through step 3.", 4)
              .bad_steps.empty());
}

TEST_CASE("missing-expression verdicts flag the step") {
    const auto a = tr::parse_bad_steps(
        "Step 2 has no clear mathematical expression.", 3);
    CHECK(a.bad_steps == std::set<int>{2});
}

TEST_CASE("out-of-range and zero step references are dropped") {
    const auto a =
        tr::parse_bad_steps("Step 0 is wrong. Step 7 is incorrect. Step 2 is flawed.", 3);
    CHECK(a.bad_steps == std::set<int>{2});
}

TEST_CASE("structured verdict takes precedence over surrounding prose") {
    const std::string text =
        "Step 1 is wrong in my first pass.\n"
        "On reflection only the third step fails.\n"
        "Erroneous steps: [3]";
    CHECK(tr::parse_bad_steps(text, 4).bad_steps == std::set<int>{3});
    CHECK(tr::parse_bad_steps("Step 2 is wrong. Erroneous steps: []", 4)
              .bad_steps.empty());
    // Last structured line wins.
    CHECK(tr::parse_bad_steps("Erroneous steps: [1]\nErroneous steps: [2, 3]", 4)
              .bad_steps == std::set<int>{2, 3});
}

TEST_CASE("unparseable or clean analyses yield no bad steps") {
    CHECK(tr::parse_bad_steps("", 3).bad_steps.empty());
    CHECK(tr::parse_bad_steps("The overall reasoning logic is sound.", 3)
              .bad_steps.empty());
    CHECK(tr::parse_bad_steps("Everything checks out numerically.", 3)
              .bad_steps.empty());
}

TEST_CASE("destination is one step before the earliest uncapped bad step") {
    CHECK(tr::select_destination({3}, {}, 3) == 2);
    CHECK(tr::select_destination({2, 5}, {}, 3) == 1);
    // Destination 1 already at cap: skip to the next earliest bad step.
    CHECK(tr::select_destination({2, 5}, {{1, 3}}, 3) == 4);
    // Rolling back to the question node (step 0) is allowed.
    CHECK(tr::select_destination({1}, {}, 3) == 0);
    // All destinations capped.
    CHECK_FALSE(tr::select_destination({2, 5}, {{1, 3}, {4, 3}}, 3).has_value());
    CHECK_FALSE(tr::select_destination({}, {}, 3).has_value());
}

TEST_CASE("destination selection agrees with the reference on random instances") {
    std::mt19937 rng(987654321);
    for (int i = 0; i < 10000; ++i) {
        std::set<int> bad;
        const int n_bad = static_cast<int>(rng() % 6);
        for (int b = 0; b < n_bad; ++b) bad.insert(1 + static_cast<int>(rng() % 12));
        std::map<int, int> counts;
        const int n_counts = static_cast<int>(rng() % 8);
        for (int c = 0; c < n_counts; ++c)
            counts[static_cast<int>(rng() % 12)] = static_cast<int>(rng() % 5);
        const int u = 1 + static_cast<int>(rng() % 4);
        CHECK(tr::select_destination(bad, counts, u) ==
              reference_destination(bad, counts, u));
    }
}

TEST_CASE("generated verdict text parses back to the planted step set") {
    // Round-trip: render analyses from a small grammar, then parse them.
    std::mt19937 rng(424242);
    const char* wrong_forms[] = {
        "Step %d is wrong because the arithmetic does not hold.",
        "There is an error in step %d.",
        "The %d-th step contains a mistake.",
        "Step %d is incorrect; the expression is misapplied."};
    const char* right_forms[] = {"Step %d is correct.",
                                 "Step %d follows logically from the previous step."};
    for (int trial = 0; trial < 1000; ++trial) {
        const int n_steps = 1 + static_cast<int>(rng() % 8);
        std::set<int> planted;
        std::ostringstream text;
        for (int s = 1; s <= n_steps; ++s) {
            char buf[160];
            if (rng() % 3 == 0) {
                planted.insert(s);
                std::snprintf(buf, sizeof buf, wrong_forms[rng() % 4], s);
            } else {
                std::snprintf(buf, sizeof buf, right_forms[rng() % 2], s);
            }
            text << buf << ' ';
        }
        if (planted.empty()) text << "The overall reasoning logic is sound.";
        CHECK(tr::parse_bad_steps(text.str(), n_steps).bad_steps == planted);
    }
}
