#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace roulette {

enum class Errc {
    EmptyPopulation,
    InvalidWeight,
    AllZero,
    IndexOutOfRange,
    StaleEngine,
    AttemptCapExceeded,
    Exhausted,
    InvalidBound,
    InsufficientDraws,
    InvalidDof,
    InvalidParameters,
    InvalidSpec,
    IoError,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure raised by the library carries one of the Errc codes so that
/// callers (and tests) can branch on the condition rather than the message.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {
    }

    [[nodiscard]] Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace roulette
