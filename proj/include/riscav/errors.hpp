// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace riscav {

// Error categories map 1:1 onto CLI exit codes:
//   IoError -> 1, ValidationError -> 2, NumericalError -> 3, GuardError -> 4.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad arguments, invalid configuration, violated type invariants.
struct ValidationError : Error {
    using Error::Error;
};

// File system and serialization failures.
struct IoError : Error {
    using Error::Error;
};

// Text-format errors that carry a 1-based line number.
struct ParseError : IoError {
    ParseError(const std::string& message, int line)
        : IoError("line " + std::to_string(line) + ": " + message), line_number(line) {}
    int line_number;
};

// Singular systems, zero-energy signals, lost precision.
struct NumericalError : Error {
    using Error::Error;
};

// Deliberate refusals (e.g. exhaustive search over too many masks).
struct GuardError : Error {
    using Error::Error;
};

} // namespace riscav
