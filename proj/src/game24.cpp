#include "tr/game24.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <vector>

namespace tr {

namespace {

// Minimal recursive-descent parser for arithmetic over integer literals.
struct Parser {
    std::string text;
    std::size_t pos = 0;
    std::vector<int> literals;
    bool ok = true;

    void skip_space() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
    }

    bool consume(char c) {
        skip_space();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    double parse_expr() {
        double v = parse_term();
        while (ok) {
            skip_space();
            if (consume('+')) v += parse_term();
            else if (consume('-')) v -= parse_term();
            else break;
        }
        return v;
    }

    double parse_term() {
        double v = parse_factor();
        while (ok) {
            skip_space();
            if (consume('*') || consume_utf8("\xc3\x97")) { // U+00D7
                v *= parse_factor();
            } else if (consume('/') || consume_utf8("\xc3\xb7")) { // U+00F7
                double d = parse_factor();
                if (d == 0.0) {
                    ok = false;
                    return 0.0;
                }
                v /= d;
            } else if (peek_is('x') || peek_is('X')) {
                ++pos;
                v *= parse_factor();
            } else {
                break;
            }
        }
        return v;
    }

    bool peek_is(char c) {
        skip_space();
        return pos < text.size() && text[pos] == c;
    }

    bool consume_utf8(const char* seq) {
        skip_space();
        std::size_t len = 0;
        while (seq[len]) ++len;
        if (text.compare(pos, len, seq) == 0) {
            pos += len;
            return true;
        }
        return false;
    }

    double parse_factor() {
        skip_space();
        if (consume('(')) {
            double v = parse_expr();
            if (!consume(')')) ok = false;
            return v;
        }
        if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            std::size_t start = pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
                ++pos;
            const int value = std::atoi(text.substr(start, pos - start).c_str());
            literals.push_back(value);
            return static_cast<double>(value);
        }
        ok = false;
        return 0.0;
    }
};

} // namespace

bool validate_game24(const std::string& expression, const std::array<int, 4>& numbers) {
    if (expression.empty()) return false;
    Parser parser;
    parser.text = expression;
    const double value = parser.parse_expr();
    parser.skip_space();
    if (!parser.ok || parser.pos != parser.text.size()) return false;
    if (parser.literals.size() != 4) return false;

    // Exact multiset match against the given numbers.
    std::vector<int> given(numbers.begin(), numbers.end());
    for (int lit : parser.literals) {
        bool found = false;
        for (auto it = given.begin(); it != given.end(); ++it) {
            if (*it == lit) {
                given.erase(it);
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return std::fabs(value - 24.0) < 1e-6;
}

} // namespace tr
