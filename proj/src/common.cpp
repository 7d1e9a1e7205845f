#include "wecs/common.hpp"

#include "wecs/error.hpp"

namespace wecs {

std::string_view to_string(OperatingMode mode) noexcept {
    switch (mode) {
        case OperatingMode::TurbineEmulation: return "turbine_emulation";
        case OperatingMode::TorqueControl: return "torque_control";
        case OperatingMode::SpeedControl: return "speed_control";
    }
    return "unknown";
}

std::string_view to_string(ViolationKind kind) noexcept {
    switch (kind) {
        case ViolationKind::OverSpeed: return "over_speed";
        case ViolationKind::OverTorque: return "over_torque";
        case ViolationKind::OverPower: return "over_power";
    }
    return "unknown";
}

OperatingMode parse_operating_mode(std::string_view text) {
    if (text == "turbine_emulation") return OperatingMode::TurbineEmulation;
    if (text == "torque_control") return OperatingMode::TorqueControl;
    if (text == "speed_control") return OperatingMode::SpeedControl;
    throw ConfigError("unknown operating mode '" + std::string(text) + "'");
}

}  // namespace wecs
