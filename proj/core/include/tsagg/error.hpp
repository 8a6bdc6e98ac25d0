#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tsagg {

/// Base class for every error raised by the library. The category string is
/// what the command-line front end prints before the message.
class Error : public std::runtime_error {
public:
    Error(std::string category, const std::string& what)
        : std::runtime_error(what), category_(std::move(category)) {}

    const std::string& category() const noexcept { return category_; }

private:
    std::string category_;
};

/// Malformed input data: bad files, schema violations, dangling references.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what) : Error("input", what) {}
};

/// A caller broke an operation's precondition.
class ContractError : public Error {
public:
    explicit ContractError(const std::string& what) : Error("contract", what) {}
};

/// The simplex could not finish (iteration guard) or a solve was not optimal
/// where optimality is required.
class SolverError : public Error {
public:
    explicit SolverError(const std::string& what) : Error("solver", what) {}
};

/// A timestep LP has no feasible dispatch.
class InfeasibleError : public Error {
public:
    InfeasibleError(std::size_t timestep, const std::string& what)
        : Error("infeasible", what), timestep_(timestep) {}

    /// One-based timestep.
    std::size_t timestep() const noexcept { return timestep_; }

private:
    std::size_t timestep_;
};

/// A search refused to run, e.g. exhaustive enumeration over too many bases.
class LimitError : public Error {
public:
    explicit LimitError(const std::string& what) : Error("limit", what) {}
};

/// A metric whose denominator is zero.
class UndefinedMetricError : public Error {
public:
    explicit UndefinedMetricError(const std::string& what) : Error("metric", what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error("io", what) {}
};

}  // namespace tsagg
