#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wavegp {

enum class ErrorKind {
    UnsupportedFamily,
    NonConvergence,
    TruncationTooSmall,
    NotPositiveDefinite,
    GridTooCoarse,
    EmptyWindow,
    SpectralUnavailable,
    Diverged,
    ThresholdNotExceeded,
    InvalidArgument,
    Io,
};

inline std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::UnsupportedFamily: return "UnsupportedFamily";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::GridTooCoarse: return "GridTooCoarse";
    case ErrorKind::EmptyWindow: return "EmptyWindow";
    case ErrorKind::SpectralUnavailable: return "SpectralUnavailable";
    case ErrorKind::Diverged: return "Diverged";
    case ErrorKind::ThresholdNotExceeded: return "ThresholdNotExceeded";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

/// Process exit code used by the CLI for each failure category.
inline int exit_code(ErrorKind kind) { return 10 + static_cast<int>(kind); }

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace wavegp
