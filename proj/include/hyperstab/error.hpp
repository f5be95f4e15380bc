#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hyperstab {

enum class ErrorKind {
    OutOfRange,
    Degenerate,
    SameVertex,
    TooLarge,
    Overflow,
    InvalidSpec,
    AlphaOutOfRange,
    UnknownName,
    ArityMismatch,
    WrongShape,
    LengthMismatch,
    NegativeWeight,
    EqualParameters,
    Parse,
};

inline std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::Degenerate: return "Degenerate";
    case ErrorKind::SameVertex: return "SameVertex";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::AlphaOutOfRange: return "AlphaOutOfRange";
    case ErrorKind::UnknownName: return "UnknownName";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::WrongShape: return "WrongShape";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::NegativeWeight: return "NegativeWeight";
    case ErrorKind::EqualParameters: return "EqualParameters";
    case ErrorKind::Parse: return "Parse";
    }
    return "Unknown";
}

/// Every library failure is reported through this type; `kind()` is stable
/// and meant for programmatic checks, `what()` is for humans.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace hyperstab
