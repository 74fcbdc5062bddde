#ifndef ECODRIVE_ERRORS_HPP
#define ECODRIVE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ecodrive {

/// Malformed input file or config value. Maps to exit code 2 in the CLI.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Problem has no feasible solution (route, mode, or solver level).
/// Maps to exit code 3 in the CLI.
class InfeasibleError : public std::runtime_error {
public:
    explicit InfeasibleError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace ecodrive

#endif
