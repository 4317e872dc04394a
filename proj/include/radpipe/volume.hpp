#pragma once

#include <array>
#include <cstdint>
#include <cstddef>
#include <vector>

#include "radpipe/error.hpp"

namespace radpipe {

using Index3 = std::array<std::int64_t, 3>;
using Vec3 = std::array<double, 3>;

// Column-major 3x3 direction-cosine matrix: column a is the world direction
// of voxel axis a. m[r][c] = row r, column c.
using Mat3 = std::array<std::array<double, 3>, 3>;

constexpr Mat3 identity_mat3() {
    return Mat3{{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}};
}

double det3(const Mat3& m);

// Shared grid geometry: dims, spacing (mm), origin (mm) and orientation.
// Voxel (i,j,k) is stored at index i + nx*(j + ny*k); its world position is
// origin + orientation * diag(spacing) * (i,j,k).
struct GridGeometry {
    Index3 dims{0, 0, 0};
    Vec3 spacing{1.0, 1.0, 1.0};
    Vec3 origin{0.0, 0.0, 0.0};
    Mat3 orientation = identity_mat3();

    std::size_t voxel_count() const {
        return static_cast<std::size_t>(dims[0]) * static_cast<std::size_t>(dims[1]) *
               static_cast<std::size_t>(dims[2]);
    }
    std::size_t flat(std::int64_t i, std::int64_t j, std::int64_t k) const {
        return static_cast<std::size_t>(i) +
               static_cast<std::size_t>(dims[0]) *
                   (static_cast<std::size_t>(j) + static_cast<std::size_t>(dims[1]) * static_cast<std::size_t>(k));
    }
    bool contains(std::int64_t i, std::int64_t j, std::int64_t k) const {
        return i >= 0 && i < dims[0] && j >= 0 && j < dims[1] && k >= 0 && k < dims[2];
    }
    Vec3 world_position(const Index3& v) const;
    void validate() const;  // throws FormatError on bad dims/spacing/orientation
};

struct Volume {
    GridGeometry grid;
    std::vector<double> voxels;  // 64-bit reals regardless of on-disk datatype

    double at(std::int64_t i, std::int64_t j, std::int64_t k) const { return voxels[grid.flat(i, j, k)]; }
    double& at(std::int64_t i, std::int64_t j, std::int64_t k) { return voxels[grid.flat(i, j, k)]; }
};

struct Mask {
    GridGeometry grid;
    std::vector<std::uint8_t> voxels;  // strictly {0,1}

    std::uint8_t at(std::int64_t i, std::int64_t j, std::int64_t k) const { return voxels[grid.flat(i, j, k)]; }
    std::uint8_t& at(std::int64_t i, std::int64_t j, std::int64_t k) { return voxels[grid.flat(i, j, k)]; }
    std::size_t foreground_count() const;
};

// Throws AlignmentError unless dims match exactly and spacing/orientation
// agree within 1e-4 relative tolerance.
void check_aligned(const GridGeometry& a, const GridGeometry& b);

}  // namespace radpipe
