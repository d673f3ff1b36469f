#include "roulette/error.hpp"

namespace roulette {

std::string_view to_string(Errc code) noexcept
{
    switch (code) {
    case Errc::EmptyPopulation: return "EmptyPopulation";
    case Errc::InvalidWeight: return "InvalidWeight";
    case Errc::AllZero: return "AllZero";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::StaleEngine: return "StaleEngine";
    case Errc::AttemptCapExceeded: return "AttemptCapExceeded";
    case Errc::Exhausted: return "Exhausted";
    case Errc::InvalidBound: return "InvalidBound";
    case Errc::InsufficientDraws: return "InsufficientDraws";
    case Errc::InvalidDof: return "InvalidDof";
    case Errc::InvalidParameters: return "InvalidParameters";
    case Errc::InvalidSpec: return "InvalidSpec";
    case Errc::IoError: return "IoError";
    }
    return "Unknown";
}

} // namespace roulette
