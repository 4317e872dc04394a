#pragma once

#include "radpipe/volume.hpp"

namespace radpipe {

// Gaussian smoothing parameters. sigma_mm is isotropic in world units and is
// converted to voxel units per axis via the grid spacing; truncation sets the
// kernel radius in sigmas (radius = ceil(truncation * sigma_mm / spacing), at
// least 1 sample each side).
struct GaussianParams {
    double sigma_mm = 0.5;
    double truncation = 3.0;
};

// Reorders and flips voxel data so the output orientation is the identity.
// Only axis-aligned scans are accepted: each column of the orientation matrix
// must lie within 1e-3 of a signed unit vector after normalization. Oblique
// inputs raise UnsupportedOrientationError; no interpolation ever happens.
Volume reorient_to_canonical(const Volume& v);

// Reorients a mask with the same index permutation (values stay binary).
Mask reorient_to_canonical(const Mask& m);

// Separable Gaussian convolution along x, then y, then z. Kernels are
// discretely sampled and renormalized to sum exactly 1; boundaries use mirror
// reflection without repeating the edge sample (period 2n-2).
Volume gaussian_denoise(const Volume& v, const GaussianParams& p);

}  // namespace radpipe
