#pragma once

#include <stdexcept>

namespace fbs {

// Base class for everything this library throws. The three subclasses map to
// distinct CLI exit codes (config 2, data 3, guard 4).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid parameters or option combinations (bad K, malformed ranges, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

// Malformed or inconsistent input data (files, numeric invariants).
class DataError : public Error {
public:
    using Error::Error;
};

// Combinatorial guard tripped: the requested exhaustive search is too large.
class GuardError : public Error {
public:
    using Error::Error;
};

} // namespace fbs
