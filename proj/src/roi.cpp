#include "radpipe/roi.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "radpipe/error.hpp"

namespace radpipe {

namespace {

void check_box(const BoundingBox& b, const Index3& dims) {
    for (int a = 0; a < 3; ++a) {
        if (b.lo[a] > b.hi[a])
            throw RangeError("bounding box lo > hi on axis " + std::to_string(a));
        if (b.lo[a] < 0 || b.hi[a] >= dims[a])
            throw RangeError("bounding box exceeds grid on axis " + std::to_string(a));
    }
}

template <typename VolumeLike>
VolumeLike crop_impl(const VolumeLike& v, const BoundingBox& b) {
    check_box(b, v.grid.dims);
    VolumeLike out;
    out.grid.dims = b.extent();
    out.grid.spacing = v.grid.spacing;
    out.grid.orientation = v.grid.orientation;
    out.grid.origin = v.grid.world_position(b.lo);
    out.voxels.resize(static_cast<std::size_t>(out.grid.voxel_count()));
    for (std::int64_t k = 0; k < out.grid.dims[2]; ++k)
        for (std::int64_t j = 0; j < out.grid.dims[1]; ++j)
            for (std::int64_t i = 0; i < out.grid.dims[0]; ++i)
                out.voxels[out.grid.flat(i, j, k)] =
                    v.voxels[v.grid.flat(b.lo[0] + i, b.lo[1] + j, b.lo[2] + k)];
    return out;
}

// Edge-aligned source coordinate for destination sample t of n_dst samples.
double sample_pos(std::int64_t t, std::int64_t n_dst, std::int64_t n_src) {
    if (n_dst <= 1) return 0.0;
    return static_cast<double>(t) * static_cast<double>(n_src - 1) /
           static_cast<double>(n_dst - 1);
}

}  // namespace

BoundingBox mask_bounding_box(const Mask& m) {
    BoundingBox b;
    b.lo = {std::numeric_limits<std::int64_t>::max(), std::numeric_limits<std::int64_t>::max(),
            std::numeric_limits<std::int64_t>::max()};
    b.hi = {-1, -1, -1};
    for (std::int64_t k = 0; k < m.grid.dims[2]; ++k)
        for (std::int64_t j = 0; j < m.grid.dims[1]; ++j)
            for (std::int64_t i = 0; i < m.grid.dims[0]; ++i) {
                if (!m.voxels[m.grid.flat(i, j, k)]) continue;
                const Index3 idx{i, j, k};
                for (int a = 0; a < 3; ++a) {
                    b.lo[a] = std::min(b.lo[a], idx[a]);
                    b.hi[a] = std::max(b.hi[a], idx[a]);
                }
            }
    if (b.hi[0] < 0) throw EmptyMaskError("mask has no foreground voxels");
    return b;
}

BoundingBox expand_box(const BoundingBox& b, double fraction, const Index3& dims) {
    if (fraction < 0.0) throw RangeError("expand fraction must be >= 0");
    check_box(b, dims);
    BoundingBox out;
    for (int a = 0; a < 3; ++a) {
        const double e = static_cast<double>(b.hi[a] - b.lo[a] + 1);
        const double margin = 0.5 * fraction * e;
        out.lo[a] = std::max<std::int64_t>(
            0, static_cast<std::int64_t>(std::floor(static_cast<double>(b.lo[a]) - margin)));
        out.hi[a] = std::min<std::int64_t>(
            dims[a] - 1,
            static_cast<std::int64_t>(std::ceil(static_cast<double>(b.hi[a]) + margin)));
    }
    return out;
}

Volume crop(const Volume& v, const BoundingBox& b) { return crop_impl(v, b); }
Mask crop(const Mask& m, const BoundingBox& b) { return crop_impl(m, b); }

std::vector<SliceImage> export_slices(const Volume& v, std::int64_t width, std::int64_t height,
                                      int slice_axis) {
    v.grid.validate();
    if (width < 1 || height < 1) throw RangeError("slice target size must be >= 1");
    if (slice_axis < 0 || slice_axis > 2) throw RangeError("slice axis must be 0, 1, or 2");
    const int col_axis = slice_axis == 0 ? 1 : 0;
    const int row_axis = slice_axis == 2 ? 1 : 2;
    const std::int64_t n_col = v.grid.dims[col_axis];
    const std::int64_t n_row = v.grid.dims[row_axis];
    const std::int64_t n_slices = v.grid.dims[slice_axis];

    std::vector<SliceImage> slices;
    slices.reserve(static_cast<std::size_t>(n_slices));
    std::vector<double> plane(static_cast<std::size_t>(n_col * n_row));
    for (std::int64_t s = 0; s < n_slices; ++s) {
        for (std::int64_t r = 0; r < n_row; ++r)
            for (std::int64_t c = 0; c < n_col; ++c) {
                Index3 idx{};
                idx[slice_axis] = s;
                idx[col_axis] = c;
                idx[row_axis] = r;
                plane[static_cast<std::size_t>(r * n_col + c)] =
                    v.voxels[v.grid.flat(idx[0], idx[1], idx[2])];
            }

        SliceImage img;
        img.width = width;
        img.height = height;
        img.pixels.resize(static_cast<std::size_t>(width * height));
        for (std::int64_t y = 0; y < height; ++y) {
            const double sy = sample_pos(y, height, n_row);
            const std::int64_t y0 =
                std::min<std::int64_t>(static_cast<std::int64_t>(sy), n_row - 1);
            const std::int64_t y1 = std::min<std::int64_t>(y0 + 1, n_row - 1);
            const double fy = sy - static_cast<double>(y0);
            for (std::int64_t x = 0; x < width; ++x) {
                const double sx = sample_pos(x, width, n_col);
                const std::int64_t x0 =
                    std::min<std::int64_t>(static_cast<std::int64_t>(sx), n_col - 1);
                const std::int64_t x1 = std::min<std::int64_t>(x0 + 1, n_col - 1);
                const double fx = sx - static_cast<double>(x0);
                const double v00 = plane[static_cast<std::size_t>(y0 * n_col + x0)];
                const double v10 = plane[static_cast<std::size_t>(y0 * n_col + x1)];
                const double v01 = plane[static_cast<std::size_t>(y1 * n_col + x0)];
                const double v11 = plane[static_cast<std::size_t>(y1 * n_col + x1)];
                img.pixels[static_cast<std::size_t>(y * width + x)] =
                    (1.0 - fy) * ((1.0 - fx) * v00 + fx * v10) +
                    fy * ((1.0 - fx) * v01 + fx * v11);
            }
        }
        double lo = img.pixels[0], hi = img.pixels[0];
        for (double p : img.pixels) {
            lo = std::min(lo, p);
            hi = std::max(hi, p);
        }
        if (hi > lo) {
            for (double& p : img.pixels) p = (p - lo) / (hi - lo);
        } else {
            std::fill(img.pixels.begin(), img.pixels.end(), 0.0);
        }
        slices.push_back(std::move(img));
    }
    return slices;
}

void write_pgm16(const SliceImage& img, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write " + path);
    f << "P5\n" << img.width << ' ' << img.height << "\n65535\n";
    std::vector<unsigned char> bytes;
    bytes.reserve(img.pixels.size() * 2);
    for (double p : img.pixels) {
        const double clamped = std::clamp(p, 0.0, 1.0);
        const auto q = static_cast<unsigned>(std::lround(clamped * 65535.0));
        bytes.push_back(static_cast<unsigned char>(q >> 8));
        bytes.push_back(static_cast<unsigned char>(q & 0xff));
    }
    f.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
    if (!f) throw IoError("write failed for " + path);
}

}  // namespace radpipe
