#pragma once

#include <stdexcept>
#include <string>

namespace gamowkit {

// Every library failure is an exception rooted here, so callers can catch
// one type at the CLI boundary and map it to an exit code.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Grid is malformed or not uniform where uniformity is required.
struct GridError : Error {
    using Error::Error;
};

// Too few samples for the requested transform.
struct ResolutionError : Error {
    using Error::Error;
};

// Bad user-supplied configuration (tolerances, file contents, CLI options).
struct ConfigError : Error {
    using Error::Error;
};

// Evaluation point outside the admissible region of the complex plane.
struct DomainError : Error {
    using Error::Error;
};

// A wave function failed the Hardy-class membership test required by the
// operation's contract.
struct NotHardyError : Error {
    using Error::Error;
};

// Array/matrix shapes or bases do not match.
struct ShapeError : Error {
    using Error::Error;
};

// Evaluation requested exactly at (or numerically on top of) a pole.
struct PoleEvaluationError : Error {
    using Error::Error;
};

// Another pole sits too close to the extraction contour.
struct ContourOverlapError : Error {
    using Error::Error;
};

// Chain or block index out of range.
struct IndexError : Error {
    using Error::Error;
};

// Semigroup entry point called with t < 0.  The forward evolution of the
// causal theory is defined for t >= 0 only; use the unitary path for
// two-sided time arguments.
struct CausalityError : Error {
    using Error::Error;
};

// File could not be read/written or contains malformed data.
struct IoError : Error {
    using Error::Error;
};

}  // namespace gamowkit
