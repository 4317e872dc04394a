#include "radpipe/phantom.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "radpipe/error.hpp"
#include "radpipe/nifti.hpp"
#include "radpipe/rng.hpp"

namespace radpipe {

PhantomCase generate_case(const PhantomParams& p, int label) {
    if (p.grid < 3) throw RangeError("phantom grid must be at least 3 voxels");
    if (p.spacing_mm <= 0.0) throw RangeError("phantom spacing must be > 0");
    if (label != 0 && label != 1) throw RangeError("phantom label must be 0 or 1");

    SplitMix64 rng(p.seed);
    const double a = rng.next_uniform(p.semi_axis_min, p.semi_axis_max);
    const double b = rng.next_uniform(p.semi_axis_min, p.semi_axis_max);
    const double c = rng.next_uniform(p.semi_axis_min, p.semi_axis_max);
    const double thickness = rng.next_uniform(p.halo_thickness_min, p.halo_thickness_max);

    // The organ (and for positive cases its halo) must fit with a 2-voxel
    // margin around the grid center.
    const double half_extent = 0.5 * static_cast<double>(p.grid - 1);
    const double reach = std::max({a, b, c}) + (label == 1 ? thickness : 0.0);
    if (reach + 2.0 > half_extent)
        throw RangeError("phantom organ exceeds the grid: reach " + std::to_string(reach) +
                         " with margin 2 > " + std::to_string(half_extent));

    GridGeometry grid;
    grid.dims = {p.grid, p.grid, p.grid};
    grid.spacing = {p.spacing_mm, p.spacing_mm, p.spacing_mm};
    grid.origin = {0.0, 0.0, 0.0};
    grid.orientation = identity_mat3();

    PhantomCase out;
    out.volume.grid = grid;
    out.volume.voxels.resize(static_cast<std::size_t>(grid.voxel_count()));
    out.mask.grid = grid;
    out.mask.voxels.assign(static_cast<std::size_t>(grid.voxel_count()), 0);
    out.record.label = label;

    const double cx = half_extent, cy = half_extent, cz = half_extent;
    for (std::int64_t k = 0; k < p.grid; ++k)
        for (std::int64_t j = 0; j < p.grid; ++j)
            for (std::int64_t i = 0; i < p.grid; ++i) {
                const double dx = (static_cast<double>(i) - cx) / a;
                const double dy = (static_cast<double>(j) - cy) / b;
                const double dz = (static_cast<double>(k) - cz) / c;
                const double r2 = dx * dx + dy * dy + dz * dz;

                const bool organ = r2 <= 1.0;
                bool halo = false;
                if (!organ && label == 1) {
                    const double hx = (static_cast<double>(i) - cx) / (a + thickness);
                    const double hy = (static_cast<double>(j) - cy) / (b + thickness);
                    const double hz = (static_cast<double>(k) - cz) / (c + thickness);
                    halo = hx * hx + hy * hy + hz * hz <= 1.0;
                }

                // One noise draw per voxel in scan order keeps the stream
                // independent of the region layout.
                const double z = rng.next_gaussian();
                const std::int64_t flat = grid.flat(i, j, k);
                if (organ) {
                    out.mask.voxels[static_cast<std::size_t>(flat)] = 1;
                    out.volume.voxels[static_cast<std::size_t>(flat)] =
                        p.base_intensity + p.noise_std * z;
                } else if (halo) {
                    out.volume.voxels[static_cast<std::size_t>(flat)] =
                        p.base_intensity + p.halo_offset + 2.0 * p.noise_std * z;
                } else {
                    out.volume.voxels[static_cast<std::size_t>(flat)] = p.noise_std * z;
                }
            }
    return out;
}

std::vector<ManifestRow> generate_dataset(int n_pos, int n_neg, std::uint64_t master_seed,
                                          const std::string& out_dir) {
    if (n_pos < 1 || n_neg < 1)
        throw RangeError("phantom dataset needs at least one case per class");

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create directory " + out_dir + ": " + ec.message());

    const int total = n_pos + n_neg;
    std::vector<ManifestRow> rows;
    rows.reserve(static_cast<std::size_t>(total));
    for (int i = 0; i < total; ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "case_%04d", i);

        ManifestRow row;
        row.case_id = name;
        row.label = i < n_pos ? 1 : 0;
        row.seed = hash64(master_seed, static_cast<std::uint64_t>(i));

        PhantomParams params;
        params.seed = row.seed;
        const PhantomCase c = generate_case(params, row.label);

        const std::filesystem::path dir(out_dir);
        save_volume(c.volume, (dir / (row.case_id + "_img.nii")).string(),
                    NiftiDatatype::Float32);
        save_mask(c.mask, (dir / (row.case_id + "_msk.nii")).string());
        rows.push_back(std::move(row));
    }
    save_manifest(rows, (std::filesystem::path(out_dir) / "manifest.csv").string());
    return rows;
}

void save_manifest(const std::vector<ManifestRow>& rows, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot write " + path);
    f << "case_id,label,seed\n";
    for (const auto& row : rows) f << row.case_id << ',' << row.label << ',' << row.seed << '\n';
    if (!f) throw IoError("write failed for " + path);
}

std::vector<ManifestRow> load_manifest(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(f, line)) throw FormatError("manifest: empty file " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "case_id,label,seed")
        throw FormatError("manifest: expected header case_id,label,seed");

    std::vector<ManifestRow> rows;
    std::size_t line_no = 1;
    while (std::getline(f, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 == std::string::npos ? c1 : c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw FormatError("manifest: line " + std::to_string(line_no) +
                              " needs 3 comma-separated fields");
        ManifestRow row;
        row.case_id = line.substr(0, c1);
        const std::string label = line.substr(c1 + 1, c2 - c1 - 1);
        const std::string seed = line.substr(c2 + 1);
        if (row.case_id.empty())
            throw FormatError("manifest: empty case_id at line " + std::to_string(line_no));
        if (label != "0" && label != "1")
            throw FormatError("manifest: label must be 0 or 1 at line " +
                              std::to_string(line_no));
        row.label = label == "1" ? 1 : 0;
        try {
            std::size_t used = 0;
            row.seed = std::stoull(seed, &used);
            if (used != seed.size()) throw std::invalid_argument(seed);
        } catch (const std::exception&) {
            throw FormatError("manifest: bad seed \"" + seed + "\" at line " +
                              std::to_string(line_no));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace radpipe
