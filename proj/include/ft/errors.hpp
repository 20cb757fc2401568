#pragma once

#include <stdexcept>
#include <string>

namespace ft {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input text (bad header, unparsable field).
struct ParseError : Error {
    using Error::Error;
};

// A parsed value violates a domain invariant (e.g. low > high).
struct InvariantError : Error {
    using Error::Error;
};

// Input too short / window too large / empty partition.
struct SizeError : Error {
    using Error::Error;
};

// Mathematically undefined request (zero variance, non-positive log arg).
struct NumericError : Error {
    using Error::Error;
};

// Optimizer failed to converge; message carries best-so-far context.
struct ConvergenceError : Error {
    using Error::Error;
};

// Training produced a non-finite loss.
struct DivergenceError : Error {
    using Error::Error;
};

// HTTP / network failure.
struct TransportError : Error {
    using Error::Error;
};

// Model file corrupt or wrong version.
struct PersistenceError : Error {
    using Error::Error;
};

// Bad user-supplied configuration (missing model, empty candidate list).
struct ConfigError : Error {
    using Error::Error;
};

} // namespace ft
