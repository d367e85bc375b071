#pragma once

#include "tr/graph.hpp"

#include <string>
#include <vector>

namespace tr {

enum class AnswerKind { Numeric, MultipleChoice, Game24 };

// Normalized answer value: a number, a choice letter A-E, or a raw
// expression for Game of 24 (validity deferred to the harness).
struct Value {
    AnswerKind kind = AnswerKind::Numeric;
    double number = 0.0;
    std::string text; // choice letter or expression

    static Value numeric(double v) { return {AnswerKind::Numeric, v, {}}; }
    static Value choice(std::string letter) {
        return {AnswerKind::MultipleChoice, 0.0, std::move(letter)};
    }
    static Value expression(std::string expr) {
        return {AnswerKind::Game24, 0.0, std::move(expr)};
    }
};

// Numeric comparison with relative tolerance 1e-4 (absolute 1e-6 near zero);
// choice and expression values compare by text.
bool values_equal(const Value& a, const Value& b);

std::string value_to_string(const Value& v);

struct Solution {
    NodeId node = 0;
    std::string raw_text;
    Value value;
    int weight = 0; // beta - alpha of its path at completion; may be negative
    int completion_ordinal = 0;
};

// Marker family that terminates a reasoning path.
bool contains_solution_marker(const std::string& text);

// Value after the LAST marker occurrence, normalized per kind. Throws when
// no marker is present or the trailing text does not normalize.
Value extract_solution_value(const std::string& text, AnswerKind kind);

// Parses "15.48", "$1,234", "3/4" and similar into a double. Throws on
// failure.
double parse_numeric(const std::string& text);

// Experience-weighted majority vote: group by normalized value, score each
// group by the sum of beta-alpha weights, return the argmax. Ties go to the
// group containing the earliest-completed solution.
Value weighted_vote(const std::vector<Solution>& solutions);

} // namespace tr
