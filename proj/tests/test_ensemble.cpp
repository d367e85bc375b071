#include <doctest.h>

#include "tr/ensemble.hpp"
#include "tr/error.hpp"

#include <algorithm>
#include <limits>
#include <random>

using tr::AnswerKind;
using tr::Solution;
using tr::Value;

namespace {

Solution make_sol(Value v, int weight, int ordinal) {
    Solution s;
    s.value = std::move(v);
    s.weight = weight;
    s.completion_ordinal = ordinal;
    return s;
}

// Reference vote: exhaustive pairwise grouping with explicit tie handling.
Value reference_vote(const std::vector<Solution>& solutions) {
    std::vector<std::vector<const Solution*>> groups;
    for (const auto& s : solutions) {
        bool placed = false;
        for (auto& g : groups)
            if (tr::values_equal(g.front()->value, s.value)) {
                g.push_back(&s);
                placed = true;
                break;
            }
        if (!placed) groups.push_back({&s});
    }
    long best_score = std::numeric_limits<long>::min();
    int best_first = std::numeric_limits<int>::max();
    const std::vector<const Solution*>* best = nullptr;
    for (const auto& g : groups) {
        long score = 0;
        int first = std::numeric_limits<int>::max();
        for (const auto* s : g) {
            score += s->weight;
            first = std::min(first, s->completion_ordinal);
        }
        if (!best || score > best_score || (score == best_score && first < best_first)) {
            best = &g;
            best_score = score;
            best_first = first;
        }
    }
    return best->front()->value;
}

} // namespace

TEST_CASE("marker detection covers the full marker family") {
    CHECK(tr::contains_solution_marker("Step 4. The final solution is 12."));
    CHECK(tr::contains_solution_marker("So The solution is 9"));
    CHECK(tr::contains_solution_marker("The choice is (B)."));
    CHECK_FALSE(tr::contains_solution_marker("Step 2. Add 3 to x."));
    CHECK_FALSE(tr::contains_solution_marker("the final solution is 4")); // case-sensitive
}

TEST_CASE("numeric extraction normalizes currency, commas, and fractions") {
    CHECK(tr::extract_solution_value("The final solution is $15.48.", AnswerKind::Numeric)
              .number == doctest::Approx(15.48));
    CHECK(tr::extract_solution_value("The final solution is 1,234", AnswerKind::Numeric)
              .number == doctest::Approx(1234));
    CHECK(tr::extract_solution_value("The solution is 3/4.", AnswerKind::Numeric)
              .number == doctest::Approx(0.75));
    CHECK(tr::extract_solution_value("The final solution is -7", AnswerKind::Numeric)
              .number == doctest::Approx(-7));
}

TEST_CASE("extraction uses the last marker occurrence") {
    const std::string text =
        "The final solution is 3. Wait, correcting: The final solution is 8.";
    CHECK(tr::extract_solution_value(text, AnswerKind::Numeric).number ==
          doctest::Approx(8));
}

TEST_CASE("choice extraction takes the first letter and bounds it to A-E") {
    CHECK(tr::extract_solution_value("The choice is (B).", AnswerKind::MultipleChoice)
              .text == "B");
    CHECK(tr::extract_solution_value("The final solution is c", AnswerKind::MultipleChoice)
              .text == "C");
    CHECK_THROWS_AS(
        tr::extract_solution_value("The choice is (Z).", AnswerKind::MultipleChoice),
        tr::Error);
}

TEST_CASE("expression extraction keeps the raw expression") {
    CHECK(tr::extract_solution_value("The final solution is (10 - 4) * (2 + 2).",
                                     AnswerKind::Game24)
              .text == "(10 - 4) * (2 + 2)");
}

TEST_CASE("extraction failures throw") {
    CHECK_THROWS_AS(tr::extract_solution_value("Step 3. x = 5.", AnswerKind::Numeric),
                    tr::Error);
    CHECK_THROWS_AS(
        tr::extract_solution_value("The final solution is unclear", AnswerKind::Numeric),
        tr::Error);
    CHECK_THROWS_AS(tr::extract_solution_value("", AnswerKind::Numeric), tr::Error);
}

TEST_CASE("numeric equality uses relative tolerance") {
    CHECK(tr::values_equal(Value::numeric(10000.0), Value::numeric(10000.5)));
    CHECK_FALSE(tr::values_equal(Value::numeric(1.0), Value::numeric(1.01)));
    CHECK(tr::values_equal(Value::numeric(0.0), Value::numeric(1e-7)));
    CHECK_FALSE(tr::values_equal(Value::numeric(1.0), Value::choice("A")));
}

TEST_CASE("vote picks the heaviest value group") {
    std::vector<Solution> sols = {
        make_sol(Value::numeric(5), 2, 0),
        make_sol(Value::numeric(7), 3, 1),
        make_sol(Value::numeric(5), 2, 2),
    };
    CHECK(tr::weighted_vote(sols).number == doctest::Approx(5));
}

TEST_CASE("vote ties break toward the earliest completed solution") {
    std::vector<Solution> sols = {
        make_sol(Value::numeric(7), 2, 1),
        make_sol(Value::numeric(5), 2, 0),
    };
    CHECK(tr::weighted_vote(sols).number == doctest::Approx(5));
}

TEST_CASE("negative weights can sink a larger group") {
    std::vector<Solution> sols = {
        make_sol(Value::numeric(9), -1, 0),
        make_sol(Value::numeric(9), -1, 1),
        make_sol(Value::numeric(4), 1, 2),
    };
    CHECK(tr::weighted_vote(sols).number == doctest::Approx(4));
}

TEST_CASE("adding a zero-weight later solution never changes the winner") {
    std::mt19937 rng(777);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Solution> sols;
        const int n = 1 + static_cast<int>(rng() % 6);
        for (int i = 0; i < n; ++i)
            sols.push_back(make_sol(Value::numeric(static_cast<double>(rng() % 4)),
                                    1 + static_cast<int>(rng() % 4), i));
        const Value before = tr::weighted_vote(sols);
        sols.push_back(make_sol(Value::numeric(static_cast<double>(rng() % 4)), 0, n));
        // With positive existing scores, the extra zero-weight solution can
        // neither add score nor win a tie (its group scores at most zero).
        const Value after = tr::weighted_vote(sols);
        CHECK(tr::values_equal(before, after));
    }
}

TEST_CASE("vote agrees with a reference tally on random inputs") {
    std::mt19937 rng(13579);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<Solution> sols;
        const int n = 1 + static_cast<int>(rng() % 8);
        for (int i = 0; i < n; ++i) {
            Value v = rng() % 4 == 0
                          ? Value::choice(std::string(1, static_cast<char>('A' + rng() % 3)))
                          : Value::numeric(static_cast<double>(rng() % 5));
            sols.push_back(make_sol(std::move(v), static_cast<int>(rng() % 7) - 2, i));
        }
        CHECK(tr::values_equal(tr::weighted_vote(sols), reference_vote(sols)));
    }
}

TEST_CASE("vote result is invariant to solution order given distinct ordinals") {
    std::mt19937 rng(24680);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Solution> sols;
        const int n = 2 + static_cast<int>(rng() % 6);
        for (int i = 0; i < n; ++i)
            sols.push_back(make_sol(Value::numeric(static_cast<double>(rng() % 3)),
                                    static_cast<int>(rng() % 5) - 1, i));
        const Value base = tr::weighted_vote(sols);
        std::shuffle(sols.begin(), sols.end(), rng);
        CHECK(tr::values_equal(tr::weighted_vote(sols), base));
    }
}

TEST_CASE("vote on empty list throws") {
    CHECK_THROWS_AS(tr::weighted_vote({}), tr::Error);
}
