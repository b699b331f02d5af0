#pragma once

#include <stdexcept>
#include <string>

namespace vadtree {

// Error taxonomy shared by the whole pipeline. The CLI maps kinds to exit
// codes: input problems -> 1, backend problems -> 2, internal consistency -> 3.
enum class ErrorKind {
    invalid_input,
    coverage_violation,
    parse_failure,
    backend_unavailable,
    request_rejected,
    fixture_miss,
    internal_consistency,
    undefined_metric,
    partial_results,
    no_input,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

    int exit_code() const {
        switch (kind_) {
        case ErrorKind::backend_unavailable:
        case ErrorKind::request_rejected:
        case ErrorKind::fixture_miss:
        case ErrorKind::partial_results:
            return 2;
        case ErrorKind::internal_consistency:
            return 3;
        default:
            return 1;
        }
    }

private:
    ErrorKind kind_;
};

inline Error invalid_input(const std::string& msg) { return Error(ErrorKind::invalid_input, msg); }
inline Error coverage_violation(const std::string& msg) { return Error(ErrorKind::coverage_violation, msg); }
inline Error internal_consistency(const std::string& msg) { return Error(ErrorKind::internal_consistency, msg); }

} // namespace vadtree
