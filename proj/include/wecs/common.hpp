#pragma once

#include <string>
#include <string_view>

namespace wecs {

enum class OperatingMode { TurbineEmulation, TorqueControl, SpeedControl };

enum class ViolationKind { OverSpeed, OverTorque, OverPower };

[[nodiscard]] std::string_view to_string(OperatingMode mode) noexcept;
[[nodiscard]] std::string_view to_string(ViolationKind kind) noexcept;

/// Accepts the snake_case names produced by to_string. Throws ConfigError otherwise.
[[nodiscard]] OperatingMode parse_operating_mode(std::string_view text);

}  // namespace wecs
