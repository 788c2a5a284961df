#pragma once

#include <stdexcept>
#include <string>

namespace dfdt {

// Error categories map 1:1 onto CLI exit codes (see tools/):
//   1 internal, 2 usage/validation, 3 allocation, 4 solver, 5 I/O.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : Error {
    using Error::Error;
};

struct ValidationError : Error {
    using Error::Error;
};

struct AllocationError : Error {
    using Error::Error;
};

struct SolverError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

} // namespace dfdt
