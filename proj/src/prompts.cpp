#include "tr/prompts.hpp"

#include "tr/error.hpp"

#include <regex>

namespace tr {

namespace {

const char* const kGenerationSystem =
    "You possess expertise in solving mathematical problems through a systematic, "
    "step-by-step reasoning process during which you are dedicated to preventing "
    "repeating any errors analyzed in experiences. Your objective is to address the "
    "question using a series of reasoning steps delivered in multiple responses, with "
    "each response containing one reasoning step. It is crucial to avoid repeating "
    "errors mentioned in the given experiences. Begin by reading the provided "
    "reasoning steps and then proceed to generate the most appropriate next step in "
    "the response, ensuring that the logical progression steadily leads towards a "
    "solution.";

const char* const kAnalysisSystem =
    "You are a mathematician specializing in checking and analyzing the reasoning "
    "process containing multiple intermediate reasoning steps proposed to address a "
    "math question. Please check the correctness of the overall reasoning logic and "
    "each reasoning step regarding mathematical logic and rationality.";

const char* const kGenerationTemplate =
    "Answer the question about the problem {problem_name}. After getting the final "
    "solution, place it after the sentence 'The final solution is' for readability."
    "\n\nExperience containing previously made mistakes:\n\n"
    "#########{experiences}#########\n\n"
    "Consider the analysis in the above experience to avoid making similar mistakes "
    "during reasoning for the question.\n\n\n"
    "Question: {question}\n\n"
    "Answer: Let's think step by step.  Let's focus on carefully generating the next "
    "possible reasoning step for reasoning steps below.\n\n"
    "----------------\n{steps}\n----------------\n\n"
    "For reasoning steps within ----------------, please generate their best next "
    "step containing analysis and the corresponding mathematical expression.";

const char* const kAnalysisTemplate =
    "Analyze the reasoning steps proposed for the question about the problem "
    "{problem_name}.\n"
    "Question: {question}\n"
    "Toward addressing the given question, below is a reasoning process containing "
    "{num_steps} steps:\n\n"
    "----------------\n{steps}\n----------------\n\n"
    "Double-check the reasoning process within ----------------, please analyze its "
    "overall and each step's correctness by checking whether they are mathematical "
    "logic and rationality. Please report an error when any step does not contain a "
    "clear mathematical expression. Output empty string when no steps are given.\n";

void substitute(std::string& text, const std::string& placeholder,
                const std::string& value) {
    const std::size_t pos = text.find(placeholder);
    if (pos == std::string::npos)
        throw Error("template corruption: missing placeholder " + placeholder);
    text.replace(pos, placeholder.size(), value);
    if (text.find(placeholder, pos + value.size()) != std::string::npos)
        throw Error("template corruption: duplicate placeholder " + placeholder);
}

std::string join_lines(const std::vector<std::string>& lines) {
    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (i) out.push_back('\n');
        out += lines[i];
    }
    return out;
}

} // namespace

PromptTemplateSet PromptTemplateSet::defaults() {
    PromptTemplateSet t;
    t.generation_system = kGenerationSystem;
    t.analysis_system = kAnalysisSystem;
    t.generation_template = kGenerationTemplate;
    t.analysis_template = kAnalysisTemplate;
    return t;
}

std::string render_experience_block(const std::vector<Experience>& experiences) {
    std::string out;
    for (std::size_t i = 0; i < experiences.size(); ++i) {
        out += "#### The " + std::to_string(i) + "-th Experience with Analysis ####\n";
        out += experiences[i].analysis_text;
        out.push_back('\n');
    }
    return out;
}

std::string render_generation_prompt(const PromptTemplateSet& templates,
                                     const std::string& problem_name,
                                     const std::string& question,
                                     const std::vector<Experience>& experiences,
                                     const std::vector<std::string>& steps) {
    std::string text = templates.generation_template;
    substitute(text, "{problem_name}", problem_name);
    substitute(text, "{experiences}", render_experience_block(experiences));
    substitute(text, "{question}", question);
    substitute(text, "{steps}", join_lines(steps));
    if (!templates.few_shot_slot.empty())
        text = templates.few_shot_slot + "\n\n" + text;
    return text;
}

std::string render_analysis_prompt(const PromptTemplateSet& templates,
                                   const std::string& problem_name,
                                   const std::string& question,
                                   const std::vector<std::string>& steps) {
    std::string text = templates.analysis_template;
    substitute(text, "{problem_name}", problem_name);
    substitute(text, "{question}", question);
    substitute(text, "{num_steps}", std::to_string(steps.size()));
    substitute(text, "{steps}", join_lines(steps));
    return text;
}

std::string ensure_step_label(const std::string& text, int step_index) {
    static const std::regex labeled(R"(^\s*(?:reasoning\s+)?step\s*#?\s*\d+)",
                                    std::regex::icase);
    if (std::regex_search(text, labeled)) return text;
    return "Step " + std::to_string(step_index) + ". " + text;
}

} // namespace tr
