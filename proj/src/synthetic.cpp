#include "tr/synthetic.hpp"

#include "tr/error.hpp"

#include <algorithm>
#include <cmath>
#include <regex>
#include <sstream>

namespace tr {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t hash_string(const std::string& s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

double uniform01(std::uint64_t key) {
    return static_cast<double>(splitmix64(key) >> 11) * 0x1.0p-53;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

const std::string kFence = "----------------";

// Text between the two step fences of a rendered prompt.
std::vector<std::string> extract_steps(const std::string& user) {
    std::size_t open = user.find(kFence);
    if (open == std::string::npos) return {};
    open += kFence.size();
    const std::size_t close = user.find(kFence, open);
    if (close == std::string::npos) return {};
    const std::string body = user.substr(open, close - open);
    std::vector<std::string> steps;
    std::istringstream in(body);
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (!line.empty()) steps.push_back(line);
    }
    return steps;
}

std::string extract_question_line(const std::string& user) {
    const std::size_t pos = user.find("Question: ");
    if (pos == std::string::npos) throw Error("synthetic backend: prompt has no question");
    const std::size_t end = user.find('\n', pos);
    return user.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
}

std::string extract_task_id(const std::string& question_line) {
    static const std::regex task(R"(Task (\S+):)");
    std::smatch m;
    if (std::regex_search(question_line, m, task)) return m[1].str();
    return "untagged";
}

std::vector<int> extract_addends(const std::string& question_line) {
    const std::size_t pos = question_line.find("numbers");
    if (pos == std::string::npos)
        throw Error("synthetic backend: question does not list numbers");
    std::size_t stop = question_line.find('.', pos);
    if (stop == std::string::npos) stop = question_line.size();
    const std::string span = question_line.substr(pos, stop - pos);
    static const std::regex num(R"(-?\d+)");
    std::vector<int> out;
    for (auto it = std::sregex_iterator(span.begin(), span.end(), num);
         it != std::sregex_iterator(); ++it)
        out.push_back(std::stoi(it->str()));
    if (out.empty()) throw Error("synthetic backend: no addends in question");
    return out;
}

int count_experiences(const std::string& user) {
    int count = 0;
    std::size_t pos = 0;
    const std::string header = "-th Experience with Analysis ####";
    while ((pos = user.find(header, pos)) != std::string::npos) {
        ++count;
        pos += header.size();
    }
    return count;
}

long parse_step_addend(const std::string& step_text) {
    static const std::regex add(R"(Add (-?\d+))");
    std::smatch m;
    if (!std::regex_search(step_text, m, add))
        throw Error("synthetic step without addend: " + step_text);
    return std::stol(m[1].str());
}

CompletionResponse make_response(const CompletionRequest& request, std::string text) {
    CompletionResponse response;
    response.text = std::move(text);
    response.prompt_tokens = estimate_tokens(request.system) + estimate_tokens(request.user);
    response.generated_tokens = estimate_tokens(response.text);
    return response;
}

} // namespace

long SyntheticBackend::parse_step_total(const std::string& step_text) {
    static const std::regex total(R"(running total of (-?\d+))");
    std::smatch m;
    if (!std::regex_search(step_text, m, total))
        throw Error("synthetic step without running total: " + step_text);
    return std::stol(m[1].str());
}

std::vector<int> SyntheticBackend::wrong_step_indexes(const std::vector<std::string>& steps) {
    std::vector<int> wrong;
    long prev = 0;
    for (std::size_t j = 0; j < steps.size(); ++j) {
        const long reported = parse_step_total(steps[j]);
        const long expected = prev + parse_step_addend(steps[j]);
        if (reported != expected) wrong.push_back(static_cast<int>(j) + 1);
        prev = reported; // later steps build on whatever came before
    }
    return wrong;
}

SyntheticBackend::SyntheticBackend(SyntheticModelParams params,
                                   std::string generation_system,
                                   std::string analysis_system)
    : params_(params),
      generation_system_(std::move(generation_system)),
      analysis_system_(std::move(analysis_system)) {
    if (params_.step_error_prob < 0 || params_.step_error_prob > 1 ||
        params_.analyzer_recall < 0 || params_.analyzer_recall > 1 ||
        params_.analyzer_false_positive < 0 || params_.analyzer_false_positive > 1)
        throw Error("synthetic probabilities must lie in [0, 1]");
    if (params_.chain_length < 1) throw Error("synthetic chain length must be >= 1");
}

SyntheticTask SyntheticBackend::make_task(int question_index) const {
    SyntheticTask task;
    task.id = "q" + std::to_string(question_index);
    std::uint64_t state = splitmix64(params_.rng_seed ^ (0x51edULL * (question_index + 1)));
    long sum = 0;
    std::ostringstream list;
    for (int i = 0; i < params_.chain_length; ++i) {
        state = splitmix64(state);
        const int value = static_cast<int>(state % 9) + 1;
        task.addends.push_back(value);
        sum += value;
        if (i) list << ", ";
        list << value;
    }
    task.question = "Task " + task.id + ": compute the running total of the numbers " +
                    list.str() +
                    ". Add one number per reasoning step and report the running total "
                    "after each addition.";
    task.ground_truth = Value::numeric(static_cast<double>(sum));
    return task;
}

CompletionResponse SyntheticBackend::complete(const CompletionRequest& request) {
    if (request.system == generation_system_) return solve(request);
    if (request.system == analysis_system_) return analyze(request);
    throw Error("synthetic backend: unrecognized system prompt");
}

CompletionResponse SyntheticBackend::solve(const CompletionRequest& request) const {
    const std::string question_line = extract_question_line(request.user);
    const std::string task_id = extract_task_id(question_line);
    const std::vector<int> addends = extract_addends(question_line);
    const std::vector<std::string> steps = extract_steps(request.user);

    const int n = static_cast<int>(steps.size());
    if (n >= static_cast<int>(addends.size()))
        return make_response(request,
                             "The final solution is " +
                                 std::to_string(parse_step_total(steps.back())) + ".");

    const long prev = n > 0 ? parse_step_total(steps.back()) : 0;
    const int addend = addends[static_cast<std::size_t>(n)];
    const int step_index = n + 1;
    const int experiences = count_experiences(request.user);
    const double p_eff =
        params_.step_error_prob * std::pow(params_.experience_discount, experiences);

    std::string context;
    for (const auto& s : steps) context += s + "\n";
    // Keyed on the full prompt so distinct regeneration attempts (which carry
    // distinct accumulated analyses) draw independently, while identical
    // requests still get identical responses.
    const std::uint64_t key =
        splitmix64(params_.rng_seed ^ splitmix64(hash_string(task_id)) ^
                   splitmix64(hash_string(context)) ^
                   splitmix64(hash_string(request.user)) ^
                   splitmix64(0xa11ceULL + static_cast<std::uint64_t>(experiences)) ^
                   static_cast<std::uint64_t>(step_index));

    long total = prev + addend;
    if (uniform01(key) < p_eff)
        total += 1 + static_cast<long>(splitmix64(key ^ 0xbadULL) % 9);

    std::string text = "Step " + std::to_string(step_index) + ". Add " +
                       std::to_string(addend) + " to get a running total of " +
                       std::to_string(total) + ".";
    if (step_index == static_cast<int>(addends.size()))
        text += " The final solution is " + std::to_string(total) + ".";
    return make_response(request, text);
}

CompletionResponse SyntheticBackend::analyze(const CompletionRequest& request) const {
    const std::vector<std::string> steps = extract_steps(request.user);
    if (steps.empty()) return make_response(request, "");

    const std::string question_line = extract_question_line(request.user);
    const std::string task_id = extract_task_id(question_line);
    const std::vector<int> wrong = wrong_step_indexes(steps);

    std::string context;
    for (const auto& s : steps) context += s + "\n";

    std::ostringstream verdict;
    bool any = false;
    long prev_reported = 0;
    for (std::size_t j = 0; j < steps.size(); ++j) {
        const int index = static_cast<int>(j) + 1;
        const long reported = parse_step_total(steps[j]);
        const long expected = prev_reported + parse_step_addend(steps[j]);
        prev_reported = reported;
        const bool truly_wrong =
            std::find(wrong.begin(), wrong.end(), index) != wrong.end();
        const std::uint64_t key =
            splitmix64(params_.rng_seed ^ splitmix64(hash_string(task_id)) ^
                       splitmix64(hash_string(context)) ^ 0x4e41ULL ^
                       static_cast<std::uint64_t>(index));
        const double flag_prob =
            truly_wrong ? params_.analyzer_recall : params_.analyzer_false_positive;
        const bool flagged = uniform01(key) < flag_prob;
        if (j) verdict << ' ';
        if (flagged) {
            verdict << "Step " << index
                    << " is wrong because the running total should be " << expected
                    << " rather than " << reported
                    << ", so it does not match the mathematical expression.";
            any = true;
        } else {
            verdict << "Step " << index << " is correct.";
        }
    }
    if (!any) verdict << " The overall reasoning logic is sound.";
    return make_response(request, verdict.str());
}

} // namespace tr
