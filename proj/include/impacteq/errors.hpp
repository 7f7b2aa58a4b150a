#pragma once

#include <stdexcept>
#include <string>

namespace impacteq {

// Bad input: non-finite or out-of-range parameter. `field` names the offender.
class validation_error : public std::invalid_argument {
public:
    validation_error(std::string field, const std::string& what)
        : std::invalid_argument(what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// Numerical failure inside a solver (non-convergence, broken bracket).
class solver_error : public std::runtime_error {
public:
    explicit solver_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace impacteq
