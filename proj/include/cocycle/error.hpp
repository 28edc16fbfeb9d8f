#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cocycle {

enum class ErrorKind {
    NotSymmetric,
    NotPositiveDefinite,
    DimensionMismatch,
    SingularMatrix,
    NotUnitDeterminant,
    NotOrthogonal,
    EmptySet,
    NoConvergence,
    PreconditionViolated,
    SamplingFailure,
    NotIsometry,
    NotContinuous,
    SmallDivisor,
    MeanObstruction,
    TruncationTooSmall,
    NotASolution,
    ScaleTooFine,
    EmptyCell,
    ConfigInvalid,
    InvariantViolation,
};

inline std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::NotUnitDeterminant: return "NotUnitDeterminant";
    case ErrorKind::NotOrthogonal: return "NotOrthogonal";
    case ErrorKind::EmptySet: return "EmptySet";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::SamplingFailure: return "SamplingFailure";
    case ErrorKind::NotIsometry: return "NotIsometry";
    case ErrorKind::NotContinuous: return "NotContinuous";
    case ErrorKind::SmallDivisor: return "SmallDivisor";
    case ErrorKind::MeanObstruction: return "MeanObstruction";
    case ErrorKind::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorKind::NotASolution: return "NotASolution";
    case ErrorKind::ScaleTooFine: return "ScaleTooFine";
    case ErrorKind::EmptyCell: return "EmptyCell";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    }
    return "Unknown";
}

/// Process exit codes used by the command-line tool.
enum class ExitCode : int { Ok = 0, Config = 2, Numeric = 3, Invariant = 4 };

inline ExitCode exit_code_for(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::ConfigInvalid:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::PreconditionViolated:
    case ErrorKind::TruncationTooSmall:
    case ErrorKind::ScaleTooFine:
        return ExitCode::Config;
    case ErrorKind::NotIsometry:
    case ErrorKind::NotContinuous:
    case ErrorKind::NotASolution:
    case ErrorKind::InvariantViolation:
    case ErrorKind::NotSymmetric:
    case ErrorKind::NotOrthogonal:
    case ErrorKind::NotUnitDeterminant:
        return ExitCode::Invariant;
    default:
        return ExitCode::Numeric;
    }
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
    {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Raised by the Fourier solvers; carries every mode whose divisor fell below the floor.
class SmallDivisorError : public Error {
public:
    SmallDivisorError(std::vector<int> modes, const std::string& what)
        : Error(ErrorKind::SmallDivisor, what), modes_(std::move(modes))
    {}

    const std::vector<int>& modes() const noexcept { return modes_; }

private:
    std::vector<int> modes_;
};

/// Raised when a fiber bucket is left empty by the orbit fill pass.
class EmptyCellError : public Error {
public:
    EmptyCellError(std::vector<int> cells, const std::string& what)
        : Error(ErrorKind::EmptyCell, what), cells_(std::move(cells))
    {}

    const std::vector<int>& cells() const noexcept { return cells_; }

private:
    std::vector<int> cells_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool condition, ErrorKind kind, const std::string& what)
{
    if (!condition)
        fail(kind, what);
}

} // namespace cocycle
