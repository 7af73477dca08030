#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace newsreg {

/// Failure categories surfaced by every module. The CLI serializes the code
/// name into its error JSON, so names are part of the external interface.
enum class ErrorCode {
    alignment,
    frequency,
    insufficient_data,
    degenerate,
    singular_design,
    domain,
    referential,
    duplicate,
    zero_denominator,
    parse,
    io,
    transport,
    validation,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::alignment: return "alignment";
        case ErrorCode::frequency: return "frequency";
        case ErrorCode::insufficient_data: return "insufficient_data";
        case ErrorCode::degenerate: return "degenerate";
        case ErrorCode::singular_design: return "singular_design";
        case ErrorCode::domain: return "domain";
        case ErrorCode::referential: return "referential";
        case ErrorCode::duplicate: return "duplicate";
        case ErrorCode::zero_denominator: return "zero_denominator";
        case ErrorCode::parse: return "parse";
        case ErrorCode::io: return "io";
        case ErrorCode::transport: return "transport";
        case ErrorCode::validation: return "validation";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace newsreg
