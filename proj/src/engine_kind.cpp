#include "roulette/engine_kind.hpp"

#include <string>

#include "roulette/error.hpp"

namespace roulette {

EngineKind parse_engine_kind(std::string_view name)
{
    if (name == "linear") return EngineKind::linear;
    if (name == "binary") return EngineKind::binary;
    if (name == "acceptance") return EngineKind::acceptance;
    if (name == "hybrid") return EngineKind::hybrid;
    throw Error(Errc::InvalidParameters, "unknown engine '" + std::string(name) + "'");
}

std::string_view to_string(EngineKind kind) noexcept
{
    switch (kind) {
    case EngineKind::linear: return "linear";
    case EngineKind::binary: return "binary";
    case EngineKind::acceptance: return "acceptance";
    case EngineKind::hybrid: return "hybrid";
    }
    return "unknown";
}

} // namespace roulette
