#include "radpipe/preprocess.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

#include "radpipe/error.hpp"

namespace radpipe {

namespace {

// Signed permutation taking voxel axes to world axes: world_axis[c] is the
// world axis that voxel axis c runs along, sign[c] its direction.
struct AxisMap {
    int world_axis[3];
    int sign[3];
};

AxisMap resolve_axes(const Mat3& orientation) {
    AxisMap map{};
    bool used[3] = {false, false, false};
    for (int c = 0; c < 3; ++c) {
        double norm = 0.0;
        for (int r = 0; r < 3; ++r) norm += orientation[r][c] * orientation[r][c];
        norm = std::sqrt(norm);
        if (norm == 0.0)
            throw UnsupportedOrientationError("orientation column " + std::to_string(c) +
                                              " has zero length");
        int best = 0;
        for (int r = 1; r < 3; ++r)
            if (std::abs(orientation[r][c]) > std::abs(orientation[best][c])) best = r;
        // Off-axis components must vanish (axis-aligned scan); 1e-3 of the
        // column norm tolerates header round-off but rejects oblique gantries.
        for (int r = 0; r < 3; ++r) {
            if (r == best) continue;
            if (std::abs(orientation[r][c]) > 1e-3 * norm)
                throw UnsupportedOrientationError(
                    "oblique orientation: voxel axis " + std::to_string(c) +
                    " is not aligned with a world axis");
        }
        if (used[best])
            throw UnsupportedOrientationError("orientation maps two voxel axes to world axis " +
                                              std::to_string(best));
        used[best] = true;
        map.world_axis[c] = best;
        map.sign[c] = orientation[best][c] < 0.0 ? -1 : 1;
    }
    return map;
}

bool is_identity_map(const AxisMap& map) {
    for (int c = 0; c < 3; ++c)
        if (map.world_axis[c] != c || map.sign[c] != 1) return false;
    return true;
}

template <typename T>
void reorient_grid(const GridGeometry& in, const std::vector<T>& src, GridGeometry& out,
                   std::vector<T>& dst) {
    const AxisMap map = resolve_axes(in.orientation);

    out.orientation = identity_mat3();
    Index3 out_dims{};
    Vec3 out_spacing{};
    // src_axis_of[w] = which source axis runs along world axis w.
    int src_axis_of[3];
    for (int c = 0; c < 3; ++c) {
        const int w = map.world_axis[c];
        src_axis_of[w] = c;
        out_dims[w] = in.dims[c];
        out_spacing[w] = in.spacing[c];
    }
    out.dims = out_dims;
    out.spacing = out_spacing;

    // Output voxel (0,0,0) is the source voxel at the low end of every world
    // axis; its world position becomes the new origin.
    Index3 corner{};
    for (int c = 0; c < 3; ++c) corner[c] = map.sign[c] > 0 ? 0 : in.dims[c] - 1;
    out.origin = in.world_position(corner);

    dst.resize(src.size());
    const std::int64_t nx = out_dims[0], ny = out_dims[1], nz = out_dims[2];
    for (std::int64_t k = 0; k < nz; ++k)
        for (std::int64_t j = 0; j < ny; ++j)
            for (std::int64_t i = 0; i < nx; ++i) {
                const Index3 o{i, j, k};
                Index3 s{};
                for (int w = 0; w < 3; ++w) {
                    const int c = src_axis_of[w];
                    s[c] = map.sign[c] > 0 ? o[w] : in.dims[c] - 1 - o[w];
                }
                dst[out.flat(i, j, k)] = src[in.flat(s[0], s[1], s[2])];
            }
}

std::vector<double> gaussian_kernel(double sigma_vox, double truncation) {
    const std::int64_t radius =
        std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(truncation * sigma_vox)));
    std::vector<double> w(2 * radius + 1);
    double sum = 0.0;
    for (std::int64_t t = -radius; t <= radius; ++t) {
        const double x = static_cast<double>(t) / sigma_vox;
        w[t + radius] = std::exp(-0.5 * x * x);
        sum += w[t + radius];
    }
    for (double& v : w) v /= sum;
    return w;
}

// Mirror reflection without edge repeat: ... 2 1 | 0 1 2 ... n-1 | n-2 n-3 ...
std::int64_t reflect_index(std::int64_t p, std::int64_t n) {
    if (n == 1) return 0;
    const std::int64_t period = 2 * (n - 1);
    std::int64_t m = p % period;
    if (m < 0) m += period;
    return m < n ? m : period - m;
}

void convolve_axis(const GridGeometry& g, std::vector<double>& voxels, int axis,
                   const std::vector<double>& kernel) {
    const std::int64_t radius = static_cast<std::int64_t>(kernel.size() / 2);
    const std::int64_t n = g.dims[axis];
    std::int64_t stride = 1;
    for (int a = 0; a < axis; ++a) stride *= g.dims[a];

    std::vector<double> line(static_cast<std::size_t>(n));
    Index3 outer_dims = g.dims;
    outer_dims[axis] = 1;
    for (std::int64_t k = 0; k < outer_dims[2]; ++k)
        for (std::int64_t j = 0; j < outer_dims[1]; ++j)
            for (std::int64_t i = 0; i < outer_dims[0]; ++i) {
                const std::int64_t base = g.flat(i, j, k);
                for (std::int64_t t = 0; t < n; ++t)
                    line[static_cast<std::size_t>(t)] = voxels[base + t * stride];
                for (std::int64_t t = 0; t < n; ++t) {
                    double acc = 0.0;
                    for (std::int64_t u = -radius; u <= radius; ++u)
                        acc += kernel[u + radius] *
                               line[static_cast<std::size_t>(reflect_index(t + u, n))];
                    voxels[base + t * stride] = acc;
                }
            }
}

}  // namespace

Volume reorient_to_canonical(const Volume& v) {
    v.grid.validate();
    if (is_identity_map(resolve_axes(v.grid.orientation))) {
        Volume out = v;
        out.grid.orientation = identity_mat3();
        return out;
    }
    Volume out;
    reorient_grid(v.grid, v.voxels, out.grid, out.voxels);
    return out;
}

Mask reorient_to_canonical(const Mask& m) {
    m.grid.validate();
    if (is_identity_map(resolve_axes(m.grid.orientation))) {
        Mask out = m;
        out.grid.orientation = identity_mat3();
        return out;
    }
    Mask out;
    reorient_grid(m.grid, m.voxels, out.grid, out.voxels);
    return out;
}

Volume gaussian_denoise(const Volume& v, const GaussianParams& p) {
    v.grid.validate();
    if (p.sigma_mm <= 0.0) throw RangeError("gaussian sigma_mm must be > 0");
    if (p.truncation <= 0.0) throw RangeError("gaussian truncation must be > 0");

    Volume out = v;
    for (int axis = 0; axis < 3; ++axis) {
        const double sigma_vox = p.sigma_mm / v.grid.spacing[axis];
        convolve_axis(out.grid, out.voxels, axis, gaussian_kernel(sigma_vox, p.truncation));
    }
    return out;
}

}  // namespace radpipe
