#ifndef SUQ2_ERRORS_HPP
#define SUQ2_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace suq2 {

// Bad user-supplied parameter (q out of range, wrong branch, bad window...).
struct config_error : std::invalid_argument {
    explicit config_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// The requested object does not fit inside the truncation.
struct truncation_error : std::domain_error {
    explicit truncation_error(const std::string& msg) : std::domain_error(msg) {}
};

// Operands live on different truncated spaces.
struct space_mismatch : std::invalid_argument {
    explicit space_mismatch(const std::string& msg) : std::invalid_argument(msg) {}
};

// A stated precondition of a numerical routine does not hold (e.g. a sector
// tail that has not converged yet).
struct precondition_error : std::logic_error {
    explicit precondition_error(const std::string& msg) : std::logic_error(msg) {}
};

} // namespace suq2

#endif
