#pragma once

#include <stdexcept>
#include <string>

namespace cbd {

// Error codes surfaced by validation, analysis, and I/O. The CLI maps
// ParseError (and file I/O problems) to exit code 2, everything else to 1.
enum class Errc {
    NonUnitMass,
    NegativeProbability,
    DuplicateContent,
    OverconnectedContent,
    DuplicateContextLabel,
    EmptySystem,
    UnknownContent,
    WrongArity,
    InvalidTable,
    EpsilonOutOfRange,
    DimensionMismatch,
    SystemTooLarge,
    NotConsistentlyConnected,
    TooManyContents,
    ParseError,
    WrongShape,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const { return code_; }

  private:
    Errc code_;
};

}  // namespace cbd
