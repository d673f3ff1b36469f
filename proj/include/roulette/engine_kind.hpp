#pragma once

#include <array>
#include <string_view>

namespace roulette {

enum class EngineKind { linear, binary, acceptance, hybrid };

inline constexpr std::array kAllEngineKinds{EngineKind::linear, EngineKind::binary, EngineKind::acceptance,
                                            EngineKind::hybrid};

/// Accepts "linear", "binary", "acceptance", "hybrid"; throws InvalidParameters otherwise.
EngineKind parse_engine_kind(std::string_view name);
std::string_view to_string(EngineKind kind) noexcept;

} // namespace roulette
