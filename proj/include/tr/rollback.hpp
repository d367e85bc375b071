#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>

namespace tr {

// Free-text error analysis reduced to the step indexes it flags as bad.
struct ErrorAnalysis {
    std::string raw_text;
    std::set<int> bad_steps; // 1-based step indexes, all within [1, n_steps]
    int n_steps = 0;
};

// Scans an analysis response for step references inside sentences carrying an
// error keyword. Recognizes "step N", "reasoning step N" and "N-th step"
// forms, case-insensitively; negated phrasings ("no error") do not flag.
// A structured verdict line "Erroneous steps: [i, j, ...]" takes precedence
// when present. Out-of-range indexes are dropped; unparseable text yields an
// empty set.
ErrorAnalysis parse_bad_steps(const std::string& analysis_text, int n_steps);

// Rollback destination: one step before the first bad thought, skipping to
// the next earliest bad step when a destination already received U incoming
// rollbacks. Returns the destination step index (m-1), or nullopt when no
// bad step has an uncapped destination.
std::optional<int> select_destination(const std::set<int>& bad_steps,
                                      const std::map<int, int>& incoming_counts,
                                      int u);

// Instruction line appended to the analysis prompt in structured-verdict mode.
extern const char* const kStructuredVerdictInstruction;

} // namespace tr
