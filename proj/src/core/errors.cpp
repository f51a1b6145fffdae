#include "abcpred/core/errors.hpp"

namespace abcpred {

namespace {
std::string join_problems(const std::vector<std::string>& problems) {
    std::string out = "invalid configuration:";
    for (const auto& p : problems) {
        out += "\n  - ";
        out += p;
    }
    return out;
}
}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error(join_problems(problems)), problems_(std::move(problems)) {}

}  // namespace abcpred
