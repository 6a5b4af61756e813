#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace santa {

enum class ErrorCode {
    DuplicateId,
    UnknownPlayer,
    UnknownResource,
    NegativeValue,
    EmptyPlayers,
    InvalidTarget,
    NegativePrice,
    DimensionMismatch,
    BudgetExceeded,
    NotAddable,
    NoRemovableBlocker,
    AlreadyMatched,
    NotPerfect,
    NotAPartition,
    NotStuck,
    Parse,
    InvalidArgument,
};

constexpr std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::UnknownPlayer: return "UnknownPlayer";
    case ErrorCode::UnknownResource: return "UnknownResource";
    case ErrorCode::NegativeValue: return "NegativeValue";
    case ErrorCode::EmptyPlayers: return "EmptyPlayers";
    case ErrorCode::InvalidTarget: return "InvalidTarget";
    case ErrorCode::NegativePrice: return "NegativePrice";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::NotAddable: return "NotAddable";
    case ErrorCode::NoRemovableBlocker: return "NoRemovableBlocker";
    case ErrorCode::AlreadyMatched: return "AlreadyMatched";
    case ErrorCode::NotPerfect: return "NotPerfect";
    case ErrorCode::NotAPartition: return "NotAPartition";
    case ErrorCode::NotStuck: return "NotStuck";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

/// Every recoverable failure in the library is reported as an `Error`
/// carrying a machine-checkable code.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& detail)
        : std::runtime_error(std::string(to_string(code)) + ": " + detail)
        , code_(code)
    {
    }

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace santa
