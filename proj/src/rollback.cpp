#include "tr/rollback.hpp"

#include <algorithm>
#include <cctype>
#include <regex>

namespace tr {

const char* const kStructuredVerdictInstruction =
    "\nAt the end of your analysis, output one line of the exact form "
    "'Erroneous steps: [i, j, ...]' listing the indexes of the erroneous "
    "steps, or 'Erroneous steps: []' when every step is correct.";

namespace {

std::string to_lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

// Sentence-level split; decimals get cut too, which is harmless here.
std::vector<std::string> split_sentences(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == '.' || c == '!' || c == '?' || c == ';' || c == '\n') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

void erase_all(std::string& s, const std::string& phrase) {
    std::size_t pos = 0;
    while ((pos = s.find(phrase, pos)) != std::string::npos) s.erase(pos, phrase.size());
}

bool sentence_flags_error(const std::string& sentence_lower) {
    if (sentence_lower.find("no clear mathematical expression") != std::string::npos)
        return true;
    std::string s = sentence_lower;
    for (const char* neg : {"no error", "no mistake", "without error", "without mistake",
                            "error-free", "free of error", "not wrong", "no wrong"})
        erase_all(s, neg);
    for (const char* kw : {"not correct", "wrong", "error", "incorrect", "mistake", "flawed"})
        if (s.find(kw) != std::string::npos) return true;
    return false;
}

std::set<int> step_references(const std::string& sentence) {
    static const std::regex word_form(R"(step\s*#?\s*(\d+))", std::regex::icase);
    static const std::regex ordinal_form(R"((\d+)\s*-?\s*(?:st|nd|rd|th)\s+step)",
                                         std::regex::icase);
    std::set<int> refs;
    for (auto it = std::sregex_iterator(sentence.begin(), sentence.end(), word_form);
         it != std::sregex_iterator(); ++it)
        refs.insert(std::stoi((*it)[1].str()));
    for (auto it = std::sregex_iterator(sentence.begin(), sentence.end(), ordinal_form);
         it != std::sregex_iterator(); ++it)
        refs.insert(std::stoi((*it)[1].str()));
    return refs;
}

// Structured verdict line, e.g. "Erroneous steps: [2, 4]". Returns the last
// occurrence when several are present.
std::optional<std::set<int>> structured_verdict(const std::string& text) {
    static const std::regex line(R"(erroneous steps\s*:\s*\[([^\]]*)\])", std::regex::icase);
    std::optional<std::set<int>> result;
    for (auto it = std::sregex_iterator(text.begin(), text.end(), line);
         it != std::sregex_iterator(); ++it) {
        std::set<int> steps;
        static const std::regex num(R"(\d+)");
        const std::string body = (*it)[1].str();
        for (auto n = std::sregex_iterator(body.begin(), body.end(), num);
             n != std::sregex_iterator(); ++n)
            steps.insert(std::stoi(n->str()));
        result = std::move(steps);
    }
    return result;
}

} // namespace

ErrorAnalysis parse_bad_steps(const std::string& analysis_text, int n_steps) {
    ErrorAnalysis out;
    out.raw_text = analysis_text;
    out.n_steps = n_steps;

    std::set<int> flagged;
    if (auto structured = structured_verdict(analysis_text)) {
        flagged = std::move(*structured);
    } else {
        for (const auto& sentence : split_sentences(analysis_text)) {
            if (!sentence_flags_error(to_lower(sentence))) continue;
            for (int ref : step_references(sentence)) flagged.insert(ref);
        }
    }
    for (int step : flagged)
        if (step >= 1 && step <= n_steps) out.bad_steps.insert(step);
    return out;
}

std::optional<int> select_destination(const std::set<int>& bad_steps,
                                      const std::map<int, int>& incoming_counts,
                                      int u) {
    for (int m : bad_steps) { // std::set iterates in increasing order
        if (m < 1) continue;
        const int dest = m - 1;
        auto it = incoming_counts.find(dest);
        const int count = it == incoming_counts.end() ? 0 : it->second;
        if (count < u) return dest;
    }
    return std::nullopt;
}

} // namespace tr
