#include "radpipe/volume.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace radpipe {

double det3(const Mat3& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

Vec3 GridGeometry::world_position(const Index3& v) const {
    Vec3 x = origin;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) x[r] += orientation[r][c] * spacing[c] * static_cast<double>(v[c]);
    return x;
}

void GridGeometry::validate() const {
    for (int a = 0; a < 3; ++a) {
        if (dims[a] <= 0)
            throw FormatError("grid: dims[" + std::to_string(a) + "] must be positive, got " +
                              std::to_string(dims[a]));
        if (!(spacing[a] > 0.0))
            throw FormatError("grid: spacing[" + std::to_string(a) + "] must be > 0, got " +
                              std::to_string(spacing[a]));
    }
    if (det3(orientation) == 0.0) throw FormatError("grid: orientation matrix is singular");
}

std::size_t Mask::foreground_count() const {
    std::size_t n = 0;
    for (std::uint8_t v : voxels) n += v;
    return n;
}

namespace {

bool close_rel(double a, double b, double rel) {
    const double scale = std::max({std::abs(a), std::abs(b), 1.0});
    return std::abs(a - b) <= rel * scale;
}

}  // namespace

void check_aligned(const GridGeometry& a, const GridGeometry& b) {
    for (int i = 0; i < 3; ++i) {
        if (a.dims[i] != b.dims[i])
            throw AlignmentError("grids differ in dims[" + std::to_string(i) + "]: " +
                                 std::to_string(a.dims[i]) + " vs " + std::to_string(b.dims[i]));
        if (!close_rel(a.spacing[i], b.spacing[i], 1e-4))
            throw AlignmentError("grids differ in spacing[" + std::to_string(i) + "]");
    }
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            if (!close_rel(a.orientation[r][c], b.orientation[r][c], 1e-4))
                throw AlignmentError("grids differ in orientation");
}

}  // namespace radpipe
