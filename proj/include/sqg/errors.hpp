#pragma once

#include <stdexcept>
#include <string>

namespace sqg {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed arguments: out-of-range indices, mismatched dimensions, bad parameters.
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// A value violates a type invariant (non-Hermitian input, non-PSD state, ...).
class ContractError : public Error {
public:
    using Error::Error;
};

class SizeError : public Error {
public:
    using Error::Error;
};

class RankError : public Error {
public:
    using Error::Error;
};

class NotEntangledError : public Error {
public:
    using Error::Error;
};

class ConstructionError : public Error {
public:
    using Error::Error;
};

/// An iterative solver did not reach its certificate tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double best_gap, int restart = -1)
        : Error(what), best_gap_(best_gap), restart_(restart) {}

    double best_gap() const noexcept { return best_gap_; }
    int restart() const noexcept { return restart_; }

private:
    double best_gap_;
    int restart_;
};

}  // namespace sqg
