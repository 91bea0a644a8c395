#pragma once

#include <stdexcept>
#include <string>

namespace seawake {

// Every failure in the toolkit is reported as an Error whose message is
// prefixed with the module that raised it ("telemetry: ...", "flowlab: ...").
// The code tells callers *what kind* of failure happened without string
// matching; the CLI maps any Error to a nonzero exit.
enum class ErrorCode {
    parse,            // malformed input text (carries a line number)
    validation,       // value outside its documented domain
    empty_input,      // an input collection/stream that must be non-empty is empty
    empty_window,     // a time window that leaves some vessel unaddressable
    out_of_range,     // query outside the covered span (no extrapolation)
    lookup,           // unknown vessel or missing anchor
    contract,         // caller broke a precondition (dimension/length mismatch, ...)
    schema,           // structured document does not match its schema
    annotation,       // bad manual annotation (centre outside frame, zero box, ...)
    geometry,         // frame too small for the requested construction
    scale_undefined,  // metre baseline below the degeneracy threshold
    io,               // filesystem / decode failure
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, long line = -1)
        : std::runtime_error(message), code_(code), line_(line) {}

    ErrorCode code() const noexcept { return code_; }

    // 1-based input line for ErrorCode::parse, -1 otherwise.
    long line() const noexcept { return line_; }

private:
    ErrorCode code_;
    long line_;
};

}  // namespace seawake
