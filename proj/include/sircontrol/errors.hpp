#pragma once

#include <stdexcept>
#include <string>

namespace sir {

// Root of the library's error hierarchy.  Two branches matter to callers:
// ValidationError (bad inputs: parameters, states, strategies, scenario files)
// and NumericError (a computation could not be completed).  The CLI maps the
// former to exit code 2 and the latter to exit code 3.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class NumericError : public Error {
public:
    using Error::Error;
};

// -- validation ---------------------------------------------------------

class InvalidParams : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class InvalidState : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class InvalidOptions : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class InvalidControl : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// total_incidence / costs asked to run past the configured horizon.
class HorizonTooShort : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// costs() on a control whose support is not bounded.
class UnboundedCost : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// quantize() with an amplitude below the sup level of the input.
class AmplitudeTooSmall : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// Optimization routines require r0 > 1; below that there is nothing to time.
class NoOutbreak : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// calibrate_peak_min: the requested budget cannot be spent by any level p.
class BudgetInfeasible : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// Scenario file could not be parsed; message carries file:line context.
class ScenarioError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// -- numerics -----------------------------------------------------------

// Non-finite state encountered while stepping the ODE.
class IntegrationDiverged : public NumericError {
public:
    using NumericError::NumericError;
};

// invert_special: the requested value lies below the range minimum.
class BelowMinimum : public NumericError {
public:
    using NumericError::NumericError;
};

} // namespace sir
