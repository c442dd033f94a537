#pragma once

#include <stdexcept>
#include <string>

namespace ganlab {

// Base class for everything this library throws.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad sizes, counts, enum values, or otherwise unusable configuration.
struct ConfigError : Error {
    using Error::Error;
};

// Dimension mismatch between matrices / layers; message carries expected vs actual.
struct ShapeError : Error {
    using Error::Error;
};

// Malformed file contents (e.g. wrong IDX magic).
struct FormatError : Error {
    using Error::Error;
};

// Failed or truncated reads/writes.
struct IoError : Error {
    using Error::Error;
};

// Two inputs that must agree do not (image/label counts, cache vs model).
struct ConsistencyError : Error {
    using Error::Error;
};

// Out-of-order checkpoint epochs or non-monotone counters.
struct OrderingError : Error {
    using Error::Error;
};

// Run logs that cannot be compared (different checkpoint sets).
struct ComparisonError : Error {
    using Error::Error;
};

// Training produced a non-finite loss; carries where it happened.
struct DivergenceError : Error {
    DivergenceError(const std::string& what, long epoch, long batch)
        : Error(what), epoch(epoch), batch(batch) {}
    long epoch;
    long batch;
};

}  // namespace ganlab
