#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace sirv {

/// Invalid configuration. Carries every violation found, not just the first.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> violations)
        : std::runtime_error(join(violations)), violations_(std::move(violations)) {}

    explicit ConfigError(const std::string& msg)
        : ConfigError(std::vector<std::string>{msg}) {}

    const std::vector<std::string>& violations() const { return violations_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string s;
        for (const auto& m : v) {
            if (!s.empty()) s += "; ";
            s += m;
        }
        return s;
    }

    std::vector<std::string> violations_;
};

/// Solver blew up (monitored value beyond the divergence guard) or produced NaN.
class SolveError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace sirv
