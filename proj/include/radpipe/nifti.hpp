#pragma once

#include <string>

#include "radpipe/volume.hpp"

namespace radpipe {

// On-disk voxel datatypes supported by the NIfTI-1 reader and writer.
enum class NiftiDatatype : int {
    Uint8 = 2,
    Int16 = 4,
    Int32 = 8,
    Float32 = 16,
    Float64 = 64,
    Uint16 = 512,
};

// Reads a NIfTI-1 single file (.nii or .nii.gz). Voxels are converted to
// doubles with scl_slope/scl_inter applied when scl_slope != 0. Orientation
// comes from the sform when sform_code > 0, else the qform when
// qform_code > 0, else identity. Both byte orders are accepted.
Volume load_volume(const std::string& path);

// As load_volume, then binarizes: value > 0.5 maps to 1, else 0.
Mask load_mask(const std::string& path);

// Writes a NIfTI-1 single file with an sform carrying the grid geometry.
// A ".gz" suffix selects gzip compression. Values are cast to the requested
// datatype without rescaling; integer targets round to nearest.
void save_volume(const Volume& v, const std::string& path,
                 NiftiDatatype datatype = NiftiDatatype::Float64);
void save_mask(const Mask& m, const std::string& path);

}  // namespace radpipe
