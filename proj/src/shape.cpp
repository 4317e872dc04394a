#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "radpipe/error.hpp"
#include "radpipe/radiomics.hpp"

namespace radpipe {

namespace {

// ---------------------------------------------------------------------------
// Marching cubes over a binary mask, iso-level 0.5. Corner c of a cell has
// unit-cube coordinates ((c>>a)&1 for axis a); with binary data every surface
// vertex is an edge midpoint, so vertices live on a doubled integer lattice
// and deduplicate exactly.
//
// The 256-case triangle table is constructed, not transcribed: for each case
// the surface polygons are traced across the cell faces, pairing crossing
// edges per face and resolving ambiguous (4-crossing) faces by always
// separating the inside corners. The pairing depends only on the face's own
// corner values, so two cells sharing a face always cut it the same way and
// the global mesh is watertight by construction.
// ---------------------------------------------------------------------------

struct McCase {
    // Triangles as triples of cell edge ids.
    std::vector<std::array<int, 3>> tris;
};

struct McTables {
    std::array<McCase, 256> cases;
    // edge id -> the two corner ids it connects
    std::array<std::array<int, 2>, 12> edge_corners;
};

int corner_bit(int corner, int axis) { return (corner >> axis) & 1; }

McTables build_mc_tables() {
    McTables t;

    int edge_id[8][8];
    for (auto& row : edge_id)
        for (int& e : row) e = -1;
    int n_edges = 0;
    for (int axis = 0; axis < 3; ++axis)
        for (int c = 0; c < 8; ++c) {
            if (corner_bit(c, axis)) continue;
            const int d = c | (1 << axis);
            t.edge_corners[n_edges] = {c, d};
            edge_id[c][d] = edge_id[d][c] = n_edges;
            ++n_edges;
        }

    auto corner_pos = [](int c) {
        return std::array<double, 3>{static_cast<double>(corner_bit(c, 0)),
                                     static_cast<double>(corner_bit(c, 1)),
                                     static_cast<double>(corner_bit(c, 2))};
    };
    auto edge_mid = [&](int e) {
        const auto a = corner_pos(t.edge_corners[e][0]);
        const auto b = corner_pos(t.edge_corners[e][1]);
        return std::array<double, 3>{0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1]),
                                     0.5 * (a[2] + b[2])};
    };

    for (int config = 1; config < 255; ++config) {
        const auto inside = [&](int c) { return (config >> c) & 1; };

        // next[e] = edge the surface boundary proceeds to after e.
        std::array<int, 12> next;
        next.fill(-1);

        for (int axis = 0; axis < 3; ++axis)
            for (int side = 0; side < 2; ++side) {
                const int u = (axis + 1) % 3, v = (axis + 2) % 3;
                // Face corners in ring order.
                int ring[4];
                for (int i = 0; i < 4; ++i) {
                    const int bu = (i == 1 || i == 2) ? 1 : 0;
                    const int bv = (i == 2 || i == 3) ? 1 : 0;
                    ring[i] = (side << axis) | (bu << u) | (bv << v);
                }
                int cross_edges[4];
                int n_cross = 0;
                for (int i = 0; i < 4; ++i) {
                    const int a = ring[i], b = ring[(i + 1) % 4];
                    if (inside(a) != inside(b)) cross_edges[n_cross++] = edge_id[a][b];
                }
                if (n_cross == 0) continue;

                const std::array<double, 3> normal{
                    axis == 0 ? (side ? 1.0 : -1.0) : 0.0,
                    axis == 1 ? (side ? 1.0 : -1.0) : 0.0,
                    axis == 2 ? (side ? 1.0 : -1.0) : 0.0};

                // Emit one oriented segment per (edge pair, inside corner):
                // walking the segment with the outward normal toward the
                // viewer keeps the inside region on the left.
                auto emit = [&](int e1, int e2, int inside_corner) {
                    const auto m1 = edge_mid(e1), m2 = edge_mid(e2);
                    const auto x = corner_pos(inside_corner);
                    const std::array<double, 3> d{m2[0] - m1[0], m2[1] - m1[1], m2[2] - m1[2]};
                    const std::array<double, 3> left{normal[1] * d[2] - normal[2] * d[1],
                                                     normal[2] * d[0] - normal[0] * d[2],
                                                     normal[0] * d[1] - normal[1] * d[0]};
                    const double side_of = left[0] * (x[0] - m1[0]) + left[1] * (x[1] - m1[1]) +
                                           left[2] * (x[2] - m1[2]);
                    if (side_of > 0.0)
                        next[e1] = e2;
                    else
                        next[e2] = e1;
                };

                if (n_cross == 2) {
                    int any_inside = -1;
                    for (int rc : ring)
                        if (inside(rc)) any_inside = rc;
                    emit(cross_edges[0], cross_edges[1], any_inside);
                } else {
                    // Ambiguous face: both diagonals' corners alternate
                    // inside/outside. Cut off each inside corner separately.
                    for (int i = 0; i < 4; ++i) {
                        const int rc = ring[i];
                        if (!inside(rc)) continue;
                        const int prev = ring[(i + 3) % 4];
                        const int nxt = ring[(i + 1) % 4];
                        emit(edge_id[prev][rc], edge_id[rc][nxt], rc);
                    }
                }
            }

        // Every crossing edge must have exactly one outgoing segment,
        // otherwise the polygon tracing above is inconsistent.
        for (int e = 0; e < 12; ++e) {
            const bool crossing =
                inside(t.edge_corners[e][0]) != inside(t.edge_corners[e][1]);
            if (crossing != (next[e] >= 0))
                throw std::logic_error("marching cubes case table construction failed");
        }

        // Chain segments into cycles and fan-triangulate.
        std::array<bool, 12> used{};
        for (int start = 0; start < 12; ++start) {
            if (next[start] < 0 || used[start]) continue;
            std::vector<int> cycle;
            int e = start;
            do {
                cycle.push_back(e);
                used[e] = true;
                e = next[e];
            } while (e != start);
            for (std::size_t i = 1; i + 1 < cycle.size(); ++i)
                t.cases[config].tris.push_back({cycle[0], cycle[i], cycle[i + 1]});
        }
    }
    return t;
}

const McTables& mc_tables() {
    static const McTables t = build_mc_tables();
    return t;
}

struct Mesh {
    std::vector<std::array<std::int64_t, 3>> vertices_doubled;  // doubled lattice coords
    double surface_area = 0.0;
    double mesh_volume = 0.0;
};

Mesh marching_cubes(const Mask& m) {
    const auto& tables = mc_tables();
    const Vec3 sp = m.grid.spacing;
    const std::int64_t nx = m.grid.dims[0], ny = m.grid.dims[1], nz = m.grid.dims[2];

    // Padded lookup so the surface closes around voxels on the grid boundary.
    auto voxel = [&](std::int64_t i, std::int64_t j, std::int64_t k) -> int {
        if (i < 0 || j < 0 || k < 0 || i >= nx || j >= ny || k >= nz) return 0;
        return m.voxels[m.grid.flat(i, j, k)] ? 1 : 0;
    };
    auto physical = [&](const std::array<std::int64_t, 3>& doubled) {
        return std::array<double, 3>{0.5 * static_cast<double>(doubled[0]) * sp[0],
                                     0.5 * static_cast<double>(doubled[1]) * sp[1],
                                     0.5 * static_cast<double>(doubled[2]) * sp[2]};
    };

    Mesh mesh;
    std::unordered_map<std::int64_t, std::int32_t> vertex_index;
    double signed_volume_6 = 0.0;

    for (std::int64_t k = -1; k < nz; ++k)
        for (std::int64_t j = -1; j < ny; ++j)
            for (std::int64_t i = -1; i < nx; ++i) {
                int config = 0;
                for (int c = 0; c < 8; ++c)
                    if (voxel(i + corner_bit(c, 0), j + corner_bit(c, 1), k + corner_bit(c, 2)))
                        config |= 1 << c;
                if (config == 0 || config == 255) continue;

                for (const auto& tri : tables.cases[config].tris) {
                    std::array<std::array<double, 3>, 3> p;
                    for (int v = 0; v < 3; ++v) {
                        const auto [ca, cb] = tables.edge_corners[tri[v]];
                        const std::array<std::int64_t, 3> doubled{
                            2 * i + corner_bit(ca, 0) + corner_bit(cb, 0),
                            2 * j + corner_bit(ca, 1) + corner_bit(cb, 1),
                            2 * k + corner_bit(ca, 2) + corner_bit(cb, 2)};
                        p[v] = physical(doubled);
                        // Doubled coords are >= -2; bias keeps the key packing
                        // non-negative.
                        const std::int64_t key = (doubled[0] + 4) |
                                                 ((doubled[1] + 4) << 21) |
                                                 ((doubled[2] + 4) << 42);
                        if (vertex_index.emplace(key, mesh.vertices_doubled.size()).second)
                            mesh.vertices_doubled.push_back(doubled);
                    }
                    const std::array<double, 3> e1{p[1][0] - p[0][0], p[1][1] - p[0][1],
                                                   p[1][2] - p[0][2]};
                    const std::array<double, 3> e2{p[2][0] - p[0][0], p[2][1] - p[0][1],
                                                   p[2][2] - p[0][2]};
                    const std::array<double, 3> cr{e1[1] * e2[2] - e1[2] * e2[1],
                                                   e1[2] * e2[0] - e1[0] * e2[2],
                                                   e1[0] * e2[1] - e1[1] * e2[0]};
                    mesh.surface_area +=
                        0.5 * std::sqrt(cr[0] * cr[0] + cr[1] * cr[1] + cr[2] * cr[2]);
                    signed_volume_6 += p[0][0] * (p[1][1] * p[2][2] - p[1][2] * p[2][1]) -
                                       p[0][1] * (p[1][0] * p[2][2] - p[1][2] * p[2][0]) +
                                       p[0][2] * (p[1][0] * p[2][1] - p[1][1] * p[2][0]);
                }
            }
    mesh.mesh_volume = std::abs(signed_volume_6) / 6.0;
    return mesh;
}

double max_pairwise_distance(const std::vector<std::array<double, 3>>& pts) {
    double best_sq = 0.0;
    for (std::size_t a = 0; a < pts.size(); ++a)
        for (std::size_t b = a + 1; b < pts.size(); ++b) {
            const double dx = pts[a][0] - pts[b][0];
            const double dy = pts[a][1] - pts[b][1];
            const double dz = pts[a][2] - pts[b][2];
            best_sq = std::max(best_sq, dx * dx + dy * dy + dz * dz);
        }
    return std::sqrt(best_sq);
}

// Largest vertex-pair distance within planes of constant `axis` coordinate.
double max_planar_diameter(const Mesh& mesh, const Vec3& spacing, int axis) {
    std::unordered_map<std::int64_t, std::vector<std::array<double, 3>>> planes;
    for (const auto& d : mesh.vertices_doubled)
        planes[d[axis]].push_back({0.5 * static_cast<double>(d[0]) * spacing[0],
                                   0.5 * static_cast<double>(d[1]) * spacing[1],
                                   0.5 * static_cast<double>(d[2]) * spacing[2]});
    double best = 0.0;
    for (const auto& [coord, pts] : planes) best = std::max(best, max_pairwise_distance(pts));
    return best;
}

}  // namespace

std::vector<double> shape_features(const Mask& m) {
    m.grid.validate();
    const std::int64_t n_fg = m.foreground_count();
    if (n_fg == 0) throw EmptyMaskError("shape features need a non-empty mask");

    const Vec3 sp = m.grid.spacing;
    const Mesh mesh = marching_cubes(m);

    const double voxel_volume = static_cast<double>(n_fg) * sp[0] * sp[1] * sp[2];
    const double mesh_volume = mesh.mesh_volume;
    const double area = mesh.surface_area;
    const double sphericity =
        std::cbrt(36.0 * M_PI * mesh_volume * mesh_volume) / area;

    // Principal axes of the in-mask voxel centers, population covariance.
    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    for (std::int64_t k = 0; k < m.grid.dims[2]; ++k)
        for (std::int64_t j = 0; j < m.grid.dims[1]; ++j)
            for (std::int64_t i = 0; i < m.grid.dims[0]; ++i)
                if (m.voxels[m.grid.flat(i, j, k)])
                    mean += Eigen::Vector3d(static_cast<double>(i) * sp[0],
                                            static_cast<double>(j) * sp[1],
                                            static_cast<double>(k) * sp[2]);
    mean /= static_cast<double>(n_fg);
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (std::int64_t k = 0; k < m.grid.dims[2]; ++k)
        for (std::int64_t j = 0; j < m.grid.dims[1]; ++j)
            for (std::int64_t i = 0; i < m.grid.dims[0]; ++i)
                if (m.voxels[m.grid.flat(i, j, k)]) {
                    const Eigen::Vector3d d =
                        Eigen::Vector3d(static_cast<double>(i) * sp[0],
                                        static_cast<double>(j) * sp[1],
                                        static_cast<double>(k) * sp[2]) -
                        mean;
                    cov += d * d.transpose();
                }
    cov /= static_cast<double>(n_fg);

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(cov);
    // Ascending from Eigen; clamp round-off negatives.
    const double l_least = std::max(0.0, solver.eigenvalues()[0]);
    const double l_minor = std::max(0.0, solver.eigenvalues()[1]);
    const double l_major = std::max(0.0, solver.eigenvalues()[2]);

    const double major_len = 4.0 * std::sqrt(l_major);
    const double minor_len = 4.0 * std::sqrt(l_minor);
    const double least_len = 4.0 * std::sqrt(l_least);
    const double elongation = l_major > 0.0 ? std::sqrt(l_minor / l_major) : 1.0;
    const double flatness = l_major > 0.0 ? std::sqrt(l_least / l_major) : 1.0;

    std::vector<std::array<double, 3>> verts;
    verts.reserve(mesh.vertices_doubled.size());
    for (const auto& d : mesh.vertices_doubled)
        verts.push_back({0.5 * static_cast<double>(d[0]) * sp[0],
                         0.5 * static_cast<double>(d[1]) * sp[1],
                         0.5 * static_cast<double>(d[2]) * sp[2]});

    return {
        mesh_volume,                             // MeshVolume
        voxel_volume,                            // VoxelVolume
        area,                                    // SurfaceArea
        area / mesh_volume,                      // SurfaceVolumeRatio
        sphericity,                              // Sphericity
        major_len,                               // MajorAxisLength
        minor_len,                               // MinorAxisLength
        least_len,                               // LeastAxisLength
        elongation,                              // Elongation
        flatness,                                // Flatness
        max_pairwise_distance(verts),            // Maximum3DDiameter
        max_planar_diameter(mesh, sp, 2),        // Maximum2DDiameterSlice (fixed z)
        max_planar_diameter(mesh, sp, 0),        // Maximum2DDiameterColumn (fixed x)
        max_planar_diameter(mesh, sp, 1),        // Maximum2DDiameterRow (fixed y)
    };
}

}  // namespace radpipe
