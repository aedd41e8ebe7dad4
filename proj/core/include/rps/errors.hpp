#pragma once

#include <stdexcept>
#include <string>

namespace rps {

// Failures raised by library calls: bad construction arguments, config
// problems, registry I/O.
enum class ErrorCode {
    EvenN,
    TooSmallN,
    BadNames,
    TooManyWins,
    MatchIncomplete,
    SequencingViolation,
    DuplicateId,
    UnknownPlayer,
    CorruptFile,
    ConfigError,
};

inline const char* to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::EvenN: return "EvenN";
        case ErrorCode::TooSmallN: return "TooSmallN";
        case ErrorCode::BadNames: return "BadNames";
        case ErrorCode::TooManyWins: return "TooManyWins";
        case ErrorCode::MatchIncomplete: return "MatchIncomplete";
        case ErrorCode::SequencingViolation: return "SequencingViolation";
        case ErrorCode::DuplicateId: return "DuplicateId";
        case ErrorCode::UnknownPlayer: return "UnknownPlayer";
        case ErrorCode::CorruptFile: return "CorruptFile";
        case ErrorCode::ConfigError: return "ConfigError";
    }
    return "?";
}

class DomainError : public std::runtime_error {
public:
    DomainError(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

// Detections raised while a game is in flight. Every one is terminal for the
// game and the match; the simulator records it and aborts with no result.
enum class ProtocolError {
    InvalidCommitterSignature,
    InvalidResponderSignature,
    SwapDetected,
    BadOpening,
    OutOfOrderMessage,
    MalformedMessage,
    Timeout,
};

inline const char* to_string(ProtocolError err) {
    switch (err) {
        case ProtocolError::InvalidCommitterSignature: return "InvalidCommitterSignature";
        case ProtocolError::InvalidResponderSignature: return "InvalidResponderSignature";
        case ProtocolError::SwapDetected: return "SwapDetected";
        case ProtocolError::BadOpening: return "BadOpening";
        case ProtocolError::OutOfOrderMessage: return "OutOfOrderMessage";
        case ProtocolError::MalformedMessage: return "MalformedMessage";
        case ProtocolError::Timeout: return "Timeout";
    }
    return "?";
}

}  // namespace rps
