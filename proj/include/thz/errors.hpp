// SPDX-License-Identifier: Apache-2.0
#ifndef THZ_ERRORS_HPP
#define THZ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace thz {

// An iterative procedure (series, quadrature, bisection) ran out of budget
// before reaching its tolerance.
class NonConvergence : public std::runtime_error {
public:
    explicit NonConvergence(const std::string& what) : std::runtime_error(what) {}
};

// Arguments outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// All mobility axes disabled, or an otherwise empty problem.
class DegenerateInput : public std::invalid_argument {
public:
    explicit DegenerateInput(const std::string& what) : std::invalid_argument(what) {}
};

// Too few usable bins/samples for a statistical test.
class InsufficientData : public std::runtime_error {
public:
    explicit InsufficientData(const std::string& what) : std::runtime_error(what) {}
};

// A configuration field violates an invariant; `field()` names it.
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// Malformed scenario file.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace thz

#endif
