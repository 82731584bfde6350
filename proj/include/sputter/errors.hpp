#pragma once

#include <stdexcept>
#include <string>

namespace sputter {

// Validation-class failures (bad inputs, domain violations, malformed files).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A value lies outside D_p, D_x, D_u or D_y. The message names the constraint.
class DomainError : public ValidationError {
public:
    DomainError(const std::string& constraint, const std::string& detail = {})
        : ValidationError("domain violation: " + constraint + (detail.empty() ? "" : " (" + detail + ")")),
          constraint_(constraint) {}

    const std::string& constraint() const noexcept { return constraint_; }

private:
    std::string constraint_;
};

// log(c12 * x_rg) with x_rg <= 0.
class SingularInputError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// Zero sensor coefficients or vanishing static-characteristic denominators.
class DegenerateParameterError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class DatasetError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class ConfigError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// Numerical-class failures.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IntegrationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class InfeasibleError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

} // namespace sputter
