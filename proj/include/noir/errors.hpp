#pragma once

#include <stdexcept>
#include <string>

namespace noir {

// Error taxonomy shared by all modules. The CLI maps each class to a
// distinct exit code.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Dimension / shape violations (tensor ops, model wiring).
struct ShapeError : Error {
    using Error::Error;
};

// Caller broke an operation precondition (empty dataset, non-scalar loss, ...).
struct ContractError : Error {
    using Error::Error;
};

// Bad configuration file, unknown key, out-of-range value.
struct ConfigError : Error {
    using Error::Error;
};

// File I/O and parse failures.
struct IoError : Error {
    using Error::Error;
};

// Checkpoint format version mismatch.
struct VersionError : Error {
    using Error::Error;
};

// Linear solver failure (singular normal matrix, ...).
struct SolverError : Error {
    using Error::Error;
};

// Training produced a NaN loss; carries where it happened.
struct DivergenceError : Error {
    int epoch = -1;
    int batch = -1;
    DivergenceError(const std::string& msg, int epoch_, int batch_)
        : Error(msg), epoch(epoch_), batch(batch_) {}
};

}  // namespace noir
