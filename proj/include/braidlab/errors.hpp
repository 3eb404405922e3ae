#ifndef BRAIDLAB_ERRORS_HPP
#define BRAIDLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace braidlab {

// Invalid arguments / malformed inputs. The CLI maps this to exit code 1.
struct param_error : std::invalid_argument {
    explicit param_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// Numerical failures (mapped to exit code 2 by the CLI).
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

// No sign change in the initial bracket of a bisection.
struct bracket_error : numeric_error {
    explicit bracket_error(const std::string& msg) : numeric_error(msg) {}
};

// Fixed-point iteration hit its iteration cap before reaching tolerance.
struct convergence_error : numeric_error {
    convergence_error(const std::string& msg, double last) : numeric_error(msg), last_value(last) {}
    double last_value;
};

// A pmf was truncated too early for the requested quantity.
struct truncation_error : numeric_error {
    truncation_error(const std::string& msg, long long suggested) : numeric_error(msg), suggested_trunc(suggested) {}
    long long suggested_trunc;
};

// A search exceeded its configured cap.
struct resource_error : numeric_error {
    explicit resource_error(const std::string& msg) : numeric_error(msg) {}
};

// A quantity the theory promises (e.g. an admissible root) was not found.
struct structural_error : numeric_error {
    explicit structural_error(const std::string& msg) : numeric_error(msg) {}
};

}  // namespace braidlab

#endif
