#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "radpipe/radiomics.hpp"

namespace radpipe::texture {

// The 13 unique 3D directions (one of each +/- pair of the 26-neighborhood).
inline constexpr std::array<std::array<int, 3>, 13> kDirections{{
    {1, 0, 0},
    {0, 1, 0},
    {0, 0, 1},
    {1, 1, 0},
    {1, -1, 0},
    {1, 0, 1},
    {1, 0, -1},
    {0, 1, 1},
    {0, 1, -1},
    {1, 1, 1},
    {1, 1, -1},
    {1, -1, 1},
    {1, -1, -1},
}};

// Distinct in-mask gray levels, ascending.
std::vector<std::int32_t> present_levels(const DiscretizedRoi& d);

// Mean of per-direction feature rows. Empty input is the caller's error.
std::vector<double> mean_rows(const std::vector<std::vector<double>>& rows);

}  // namespace radpipe::texture
