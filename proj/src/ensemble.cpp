#include "tr/ensemble.hpp"

#include "tr/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <regex>
#include <sstream>

namespace tr {

namespace {

const char* const kMarkers[] = {"The final solution is", "The solution is",
                                "The choice is"};

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

bool values_equal(const Value& a, const Value& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == AnswerKind::Numeric) {
        const double diff = std::fabs(a.number - b.number);
        const double scale = std::max(std::fabs(a.number), std::fabs(b.number));
        return diff <= 1e-6 || diff <= 1e-4 * scale;
    }
    return a.text == b.text;
}

std::string value_to_string(const Value& v) {
    if (v.kind != AnswerKind::Numeric) return v.text;
    std::ostringstream out;
    out.precision(12);
    out << v.number;
    return out.str();
}

bool contains_solution_marker(const std::string& text) {
    for (const char* m : kMarkers)
        if (text.find(m) != std::string::npos) return true;
    return false;
}

double parse_numeric(const std::string& text) {
    // First number-looking token, currency symbols and thousands separators
    // stripped; simple fractions a/b supported.
    static const std::regex number(
        R"([-+]?\$?\s*\d[\d,]*(?:\.\d+)?(?:\s*/\s*\$?\d[\d,]*(?:\.\d+)?)?)");
    std::smatch m;
    if (!std::regex_search(text, m, number))
        throw Error("no numeric value in: " + text);
    std::string token = m.str();
    std::string cleaned;
    for (char c : token)
        if (c != '$' && c != ',' && c != ' ') cleaned.push_back(c);
    const std::size_t slash = cleaned.find('/');
    if (slash != std::string::npos) {
        const double num = std::stod(cleaned.substr(0, slash));
        const double den = std::stod(cleaned.substr(slash + 1));
        if (den == 0.0) throw Error("division by zero in fraction: " + token);
        return num / den;
    }
    return std::stod(cleaned);
}

Value extract_solution_value(const std::string& text, AnswerKind kind) {
    if (text.empty()) throw Error("empty solution text");
    std::size_t best = std::string::npos;
    std::size_t marker_len = 0;
    for (const char* m : kMarkers) {
        const std::string marker(m);
        std::size_t pos = text.rfind(marker);
        if (pos != std::string::npos && (best == std::string::npos || pos > best)) {
            best = pos;
            marker_len = marker.size();
        }
    }
    if (best == std::string::npos) throw Error("solution marker missing");
    const std::string tail = text.substr(best + marker_len);

    switch (kind) {
    case AnswerKind::Numeric:
        return Value::numeric(parse_numeric(tail));
    case AnswerKind::MultipleChoice: {
        for (char c : tail) {
            if (!std::isalpha(static_cast<unsigned char>(c))) continue;
            const char up = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
            if (up < 'A' || up > 'E')
                throw Error(std::string("unnormalizable choice letter: ") + c);
            return Value::choice(std::string(1, up));
        }
        throw Error("no choice letter after marker");
    }
    case AnswerKind::Game24: {
        std::string expr = trim(tail);
        while (!expr.empty() && expr.back() == '.') {
            expr.pop_back();
            expr = trim(expr);
        }
        if (expr.empty()) throw Error("empty expression after marker");
        return Value::expression(expr);
    }
    }
    throw Error("unknown answer kind");
}

Value weighted_vote(const std::vector<Solution>& solutions) {
    if (solutions.empty()) throw Error("weighted_vote on empty solution list");

    struct Group {
        Value value;
        long score = 0;
        int first_completion = std::numeric_limits<int>::max();
    };
    std::vector<Group> groups;
    for (const auto& s : solutions) {
        Group* g = nullptr;
        for (auto& candidate : groups)
            if (values_equal(candidate.value, s.value)) {
                g = &candidate;
                break;
            }
        if (!g) {
            groups.push_back({s.value, 0, std::numeric_limits<int>::max()});
            g = &groups.back();
        }
        g->score += s.weight;
        g->first_completion = std::min(g->first_completion, s.completion_ordinal);
    }

    const Group* winner = &groups.front();
    for (const auto& g : groups) {
        if (g.score > winner->score ||
            (g.score == winner->score && g.first_completion < winner->first_completion))
            winner = &g;
    }
    return winner->value;
}

} // namespace tr
