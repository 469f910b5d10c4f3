#pragma once

#include <stdexcept>
#include <string>

namespace oml {

// Bad or inconsistent input (parameters, configuration files, schedules).
class invalid_parameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A derived quantity was requested but the inputs needed to form it were
// not supplied (e.g. the radiation-pressure coefficient without beam area).
class unavailable_parameter : public invalid_parameter {
public:
    using invalid_parameter::invalid_parameter;
};

// Failure inside a numerical routine: step-size underflow, eigen-solver
// breakdown, a table lookup outside its grid.
class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace oml
