#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "radpipe/volume.hpp"

namespace radpipe {

// Inclusive axis-aligned voxel index box.
struct BoundingBox {
    Index3 lo{};
    Index3 hi{};

    Index3 extent() const {
        return {hi[0] - lo[0] + 1, hi[1] - lo[1] + 1, hi[2] - lo[2] + 1};
    }
};

// Tightest box containing every foreground voxel; EmptyMaskError if none.
BoundingBox mask_bounding_box(const Mask& m);

// Grows the box by `fraction` of each axis extent, split evenly per side and
// rounded outward: new_lo = max(0, floor(lo - (f/2)*e)),
// new_hi = min(dim-1, ceil(hi + (f/2)*e)). The result always contains b.
BoundingBox expand_box(const BoundingBox& b, double fraction, const Index3& dims);

// Extracts the subvolume covered by b. Spacing and orientation are preserved;
// the origin advances to the world position of voxel b.lo. RangeError if the
// box leaves the grid.
Volume crop(const Volume& v, const BoundingBox& b);
Mask crop(const Mask& m, const BoundingBox& b);

// One grayscale image per slice of v along slice_axis (2 = axial z, the
// default; 1 = coronal y; 0 = sagittal x), bilinearly resampled to
// width x height with edge-aligned sample positions, then min-max normalized
// to [0,1] per slice (constant slices become all zeros). Row-major
// pixels[y*width + x]; image columns run along the lower remaining axis.
struct SliceImage {
    std::int64_t width = 0;
    std::int64_t height = 0;
    std::vector<double> pixels;
};

std::vector<SliceImage> export_slices(const Volume& v, std::int64_t width = 224,
                                      std::int64_t height = 224, int slice_axis = 2);

// Writes a slice as binary PGM (P5), 16-bit big-endian, maxval 65535.
void write_pgm16(const SliceImage& img, const std::string& path);

}  // namespace radpipe
