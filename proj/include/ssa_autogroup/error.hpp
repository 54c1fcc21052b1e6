#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ssa_autogroup {

enum class ErrorKind {
    WindowOutOfRange,
    NonFiniteInput,
    NumericalFailure,
    IndexOutOfRank,
    LengthMismatch,
    DegenerateComponent,
    DegenerateWindow,
    BlockTooLarge,
    InvalidConfig,
    UnregisteredAuxSequence,
    FileNotFound,
    ParseError,
    EmptySeries,
};

[[nodiscard]] constexpr std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::WindowOutOfRange: return "WindowOutOfRange";
    case ErrorKind::NonFiniteInput: return "NonFiniteInput";
    case ErrorKind::NumericalFailure: return "NumericalFailure";
    case ErrorKind::IndexOutOfRank: return "IndexOutOfRank";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::DegenerateComponent: return "DegenerateComponent";
    case ErrorKind::DegenerateWindow: return "DegenerateWindow";
    case ErrorKind::BlockTooLarge: return "BlockTooLarge";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::UnregisteredAuxSequence: return "UnregisteredAuxSequence";
    case ErrorKind::FileNotFound: return "FileNotFound";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::EmptySeries: return "EmptySeries";
    }
    return "Unknown";
}

/// All library failures are reported through this type; `kind()` lets callers branch.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Non-fatal condition recorded alongside a result (e.g. a null component in a diagnostic).
struct Warning {
    std::string where;
    std::string message;
};

using Warnings = std::vector<Warning>;

} // namespace ssa_autogroup
