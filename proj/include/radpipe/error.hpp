#pragma once

#include <stdexcept>
#include <string>

namespace radpipe {

// Base class for all pipeline errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// File or record does not match its documented layout; the message names the
// offending field.
struct FormatError : Error { using Error::Error; };

// Voxel datatype not in the supported set.
struct UnsupportedDatatypeError : Error { using Error::Error; };

// More than three effective dimensions.
struct DimensionalityError : Error { using Error::Error; };

// Volume/mask pair whose grids do not match.
struct AlignmentError : Error { using Error::Error; };

// Operation requires at least one foreground voxel.
struct EmptyMaskError : Error { using Error::Error; };

// ROI too small for the requested texture statistic (no valid pair or
// neighborhood anywhere).
struct DegenerateRoiError : Error { using Error::Error; };

// Feature table or model whose columns do not match the expected schema.
struct SchemaError : Error { using Error::Error; };

// Box or index outside the grid.
struct RangeError : Error { using Error::Error; };

// Model file with an unknown format version.
struct VersionError : Error { using Error::Error; };

// Training data with only one class present.
struct DegenerateLabelsError : Error { using Error::Error; };

// Scan axes not aligned with the world axes.
struct UnsupportedOrientationError : Error { using Error::Error; };

// A class has fewer members than the requested fold count.
struct StratificationError : Error { using Error::Error; };

// Bad key or value in the pipeline config.
struct ConfigError : Error { using Error::Error; };

// Filesystem failure (unreadable input, unwritable output).
struct IoError : Error { using Error::Error; };

}  // namespace radpipe
