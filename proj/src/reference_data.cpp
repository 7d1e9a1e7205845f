#include "wecs/reference_data.hpp"

#include <array>
#include <cmath>

namespace wecs {

namespace {

constexpr std::array<ReferenceRow, 9> kRows{{
    {4.0, 131.02, 4.79, 45.76, 104.81, 69.56},
    {5.0, 255.90, 5.98, 57.13, 204.72, 135.86},
    {6.0, 442.19, 7.18, 68.60, 353.75, 290.87},
    {7.0, 702.19, 8.37, 79.97, 561.75, 523.52},
    {8.0, 1048.16, 9.57, 91.43, 838.52, 839.50},
    {9.0, 1492.40, 10.77, 102.90, 1193.92, 1260.82},
    {10.0, 2047.19, 11.96, 114.27, 1637.75, 1682.85},
    {11.0, 2724.82, 13.16, 125.73, 2179.85, 2239.88},
    {12.0, 3537.55, 14.36, 137.20, 2830.04, 2907.97},
}};

}  // namespace

std::span<const ReferenceRow> reference_mpp_rows() noexcept { return kRows; }

std::optional<ReferenceRow> find_reference_row(double wind_speed) noexcept {
    for (const auto& row : kRows) {
        if (std::abs(row.wind_speed - wind_speed) < 1e-9) return row;
    }
    return std::nullopt;
}

}  // namespace wecs
