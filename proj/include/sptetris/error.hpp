#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sptetris {

enum class ErrorKind {
    DivisionByZero,
    IntegerOverflow,
    FactorizationIncomplete,
    InvalidArgument,
    BlockInfeasible,
    TraceMismatch,
    NotSorted,
    ConstructionStuck,
    InvalidDims,
    OutOfRange,
    Infeasible,
    DegenerateSpectrum,
    ZeroRow,
    Parse,
    Io,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries one of the kinds above, so
// callers (notably the CLI exit-code mapping) can branch without string
// matching.
class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string & what) : std::runtime_error(what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

} // namespace sptetris
