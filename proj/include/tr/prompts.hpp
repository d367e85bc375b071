#pragma once

#include "tr/graph.hpp"

#include <string>
#include <vector>

namespace tr {

// Template set for the two prompts and their system prompts. Placeholders:
// {problem_name}, {experiences}, {question}, {steps} in the generation
// template; {problem_name}, {question}, {num_steps}, {steps} in the analysis
// template. Defaults are fixed byte-for-byte; the experience fence is nine
// '#' characters on each side and the step fence is sixteen '-' characters.
struct PromptTemplateSet {
    std::string generation_system;
    std::string analysis_system;
    std::string generation_template;
    std::string analysis_template;
    std::string few_shot_slot; // user-supplied demonstrations, empty by default

    static PromptTemplateSet defaults();
};

std::string render_experience_block(const std::vector<Experience>& experiences);

std::string render_generation_prompt(const PromptTemplateSet& templates,
                                     const std::string& problem_name,
                                     const std::string& question,
                                     const std::vector<Experience>& experiences,
                                     const std::vector<std::string>& steps);

std::string render_analysis_prompt(const PromptTemplateSet& templates,
                                   const std::string& problem_name,
                                   const std::string& question,
                                   const std::vector<std::string>& steps);

// "Step k." prefix for enumerability in the analysis prompt; applied only
// when the text does not already carry a step label.
std::string ensure_step_label(const std::string& text, int step_index);

} // namespace tr
