#pragma once

#include <stdexcept>
#include <string>

namespace svstokes {

// Malformed or inconsistent input (mesh files, parameters, targets).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public InputError {
public:
    ParseError(int line, const std::string& what)
        : InputError("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

class MeshError : public InputError {
public:
    using InputError::InputError;
};

class GeometryError : public InputError {
public:
    using InputError::InputError;
};

// A construction was requested whose hypotheses do not hold
// (vertex not locally interpolating, unacceptable edge, ...).
class ConstructionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Rank decision could not be made with a clean singular-value gap.
class NumericalIndeterminacy : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Internal consistency check failed.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace svstokes
