#include "radpipe/nifti.hpp"

#include <zlib.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <memory>
#include <vector>

namespace radpipe {

namespace {

constexpr int kHeaderSize = 348;
constexpr int kDataOffset = 352;  // header + 4 bytes extension flag

// Field offsets within the 348-byte NIfTI-1 header.
constexpr int kOffSizeofHdr = 0;
constexpr int kOffDim = 40;
constexpr int kOffDatatype = 70;
constexpr int kOffBitpix = 72;
constexpr int kOffPixdim = 76;
constexpr int kOffVoxOffset = 108;
constexpr int kOffSclSlope = 112;
constexpr int kOffSclInter = 116;
constexpr int kOffDescrip = 148;
constexpr int kOffQformCode = 252;
constexpr int kOffSformCode = 254;
constexpr int kOffQuaternB = 256;
constexpr int kOffQoffsetX = 268;
constexpr int kOffSrowX = 280;
constexpr int kOffMagic = 344;

template <typename T>
T read_at(const unsigned char* buf, int offset) {
    T v;
    std::memcpy(&v, buf + offset, sizeof(T));
    return v;
}

template <typename T>
void write_at(unsigned char* buf, int offset, T v) {
    std::memcpy(buf + offset, &v, sizeof(T));
}

template <typename T>
T byteswap(T v) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    std::memcpy(&v, b, sizeof(T));
    return v;
}

struct GzCloser {
    void operator()(gzFile f) const {
        if (f) gzclose(f);
    }
};
using GzHandle = std::unique_ptr<gzFile_s, GzCloser>;

void gz_read_exact(gzFile f, void* dst, std::size_t len, const std::string& path) {
    std::size_t done = 0;
    auto* out = static_cast<unsigned char*>(dst);
    while (done < len) {
        const unsigned chunk = static_cast<unsigned>(std::min<std::size_t>(len - done, 1u << 24));
        const int got = gzread(f, out + done, chunk);
        if (got <= 0) throw FormatError("nifti: truncated file " + path);
        done += static_cast<std::size_t>(got);
    }
}

int bitpix_for(int datatype) {
    switch (static_cast<NiftiDatatype>(datatype)) {
        case NiftiDatatype::Uint8: return 8;
        case NiftiDatatype::Int16: return 16;
        case NiftiDatatype::Uint16: return 16;
        case NiftiDatatype::Int32: return 32;
        case NiftiDatatype::Float32: return 32;
        case NiftiDatatype::Float64: return 64;
    }
    return 0;
}

struct ParsedHeader {
    Index3 dims;
    Vec3 spacing;
    int datatype = 0;
    std::int64_t data_offset = 0;
    bool swap = false;
    double scl_slope = 0.0;
    double scl_inter = 0.0;
    Vec3 origin{0.0, 0.0, 0.0};
    Mat3 orientation = identity_mat3();
};

ParsedHeader parse_header(const unsigned char* hdr, const std::string& path) {
    ParsedHeader out;

    const char* magic = reinterpret_cast<const char*>(hdr + kOffMagic);
    if (std::strncmp(magic, "n+1", 3) != 0 || magic[3] != '\0')
        throw FormatError("nifti: bad magic (expected \"n+1\") in " + path);

    // Byte order is detected from dim[0], which must land in [1,7].
    std::int16_t dim0 = read_at<std::int16_t>(hdr, kOffDim);
    if (dim0 < 1 || dim0 > 7) {
        out.swap = true;
        dim0 = byteswap(dim0);
        if (dim0 < 1 || dim0 > 7)
            throw FormatError("nifti: bad dim[0] (" + std::to_string(dim0) + ") in " + path);
    }
    auto rd_i16 = [&](int off) {
        std::int16_t v = read_at<std::int16_t>(hdr, off);
        return out.swap ? byteswap(v) : v;
    };
    auto rd_i32 = [&](int off) {
        std::int32_t v = read_at<std::int32_t>(hdr, off);
        return out.swap ? byteswap(v) : v;
    };
    auto rd_f32 = [&](int off) {
        float v = read_at<float>(hdr, off);
        return out.swap ? byteswap(v) : v;
    };

    if (rd_i32(kOffSizeofHdr) != kHeaderSize)
        throw FormatError("nifti: bad sizeof_hdr (" + std::to_string(rd_i32(kOffSizeofHdr)) +
                          ") in " + path);

    std::int16_t dim[8];
    for (int i = 0; i < 8; ++i) dim[i] = rd_i16(kOffDim + 2 * i);
    for (int i = 4; i <= dim0 && i < 8; ++i)
        if (dim[i] > 1)
            throw DimensionalityError("nifti: " + path + " has " + std::to_string(dim0) +
                                      " dimensions (dim[" + std::to_string(i) + "]=" +
                                      std::to_string(dim[i]) + "); only 3D volumes are supported");
    for (int a = 0; a < 3; ++a) {
        const std::int64_t n = (a < dim0) ? dim[a + 1] : 1;
        if (n < 1)
            throw FormatError("nifti: bad dim[" + std::to_string(a + 1) + "] (" + std::to_string(n) +
                              ") in " + path);
        out.dims[a] = n;
    }

    out.datatype = rd_i16(kOffDatatype);
    const int bp = bitpix_for(out.datatype);
    if (bp == 0)
        throw UnsupportedDatatypeError("nifti: unsupported datatype code " +
                                       std::to_string(out.datatype) + " in " + path);
    if (rd_i16(kOffBitpix) != bp)
        throw FormatError("nifti: bitpix " + std::to_string(rd_i16(kOffBitpix)) +
                          " inconsistent with datatype in " + path);

    for (int a = 0; a < 3; ++a) {
        const float s = rd_f32(kOffPixdim + 4 * (a + 1));
        if (!(s > 0.0f) || !std::isfinite(s))
            throw FormatError("nifti: bad pixdim[" + std::to_string(a + 1) + "] (" +
                              std::to_string(s) + ") in " + path);
        out.spacing[a] = s;
    }

    const float vox_offset = rd_f32(kOffVoxOffset);
    if (vox_offset < kHeaderSize)
        throw FormatError("nifti: bad vox_offset (" + std::to_string(vox_offset) + ") in " + path);
    out.data_offset = static_cast<std::int64_t>(vox_offset);

    out.scl_slope = rd_f32(kOffSclSlope);
    out.scl_inter = rd_f32(kOffSclInter);

    const std::int16_t sform_code = rd_i16(kOffSformCode);
    const std::int16_t qform_code = rd_i16(kOffQformCode);
    if (sform_code > 0) {
        double srow[3][4];
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 4; ++c) srow[r][c] = rd_f32(kOffSrowX + 16 * r + 4 * c);
        for (int c = 0; c < 3; ++c) {
            const double norm =
                std::sqrt(srow[0][c] * srow[0][c] + srow[1][c] * srow[1][c] + srow[2][c] * srow[2][c]);
            if (norm == 0.0)
                throw FormatError("nifti: srow column " + std::to_string(c) + " is zero in " + path);
            for (int r = 0; r < 3; ++r) out.orientation[r][c] = srow[r][c] / norm;
        }
        for (int r = 0; r < 3; ++r) out.origin[r] = srow[r][3];
    } else if (qform_code > 0) {
        const double b = rd_f32(kOffQuaternB);
        const double c = rd_f32(kOffQuaternB + 4);
        const double d = rd_f32(kOffQuaternB + 8);
        double a = 1.0 - (b * b + c * c + d * d);
        a = (a < 1e-7) ? 0.0 : std::sqrt(a);
        Mat3& R = out.orientation;
        R[0][0] = a * a + b * b - c * c - d * d;
        R[0][1] = 2 * b * c - 2 * a * d;
        R[0][2] = 2 * b * d + 2 * a * c;
        R[1][0] = 2 * b * c + 2 * a * d;
        R[1][1] = a * a + c * c - b * b - d * d;
        R[1][2] = 2 * c * d - 2 * a * b;
        R[2][0] = 2 * b * d - 2 * a * c;
        R[2][1] = 2 * c * d + 2 * a * b;
        R[2][2] = a * a + d * d - c * c - b * b;
        const float qfac_raw = rd_f32(kOffPixdim);
        const double qfac = (qfac_raw < 0.0f) ? -1.0 : 1.0;
        for (int r = 0; r < 3; ++r) R[r][2] *= qfac;
        for (int r = 0; r < 3; ++r) out.origin[r] = rd_f32(kOffQoffsetX + 4 * r);
    }
    return out;
}

template <typename T>
void convert_voxels(const unsigned char* raw, std::size_t n, bool swap, double slope, double inter,
                    std::vector<double>& out) {
    const bool rescale = slope != 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        T v;
        std::memcpy(&v, raw + i * sizeof(T), sizeof(T));
        if (swap) v = byteswap(v);
        const double x = static_cast<double>(v);
        out[i] = rescale ? x * slope + inter : x;
    }
}

Volume load_volume_impl(const std::string& path) {
    GzHandle f(gzopen(path.c_str(), "rb"));
    if (!f) throw IoError("cannot open " + path);

    unsigned char hdr[kHeaderSize];
    gz_read_exact(f.get(), hdr, kHeaderSize, path);
    const ParsedHeader ph = parse_header(hdr, path);

    // Skip to the voxel data.
    std::int64_t to_skip = ph.data_offset - kHeaderSize;
    std::vector<unsigned char> scratch(4096);
    while (to_skip > 0) {
        const unsigned chunk = static_cast<unsigned>(std::min<std::int64_t>(to_skip, 4096));
        const int got = gzread(f.get(), scratch.data(), chunk);
        if (got <= 0) throw FormatError("nifti: truncated file " + path);
        to_skip -= got;
    }

    Volume v;
    v.grid.dims = ph.dims;
    v.grid.spacing = ph.spacing;
    v.grid.origin = ph.origin;
    v.grid.orientation = ph.orientation;
    v.grid.validate();

    const std::size_t n = v.grid.voxel_count();
    const std::size_t elem = static_cast<std::size_t>(bitpix_for(ph.datatype)) / 8;
    std::vector<unsigned char> raw(n * elem);
    gz_read_exact(f.get(), raw.data(), raw.size(), path);

    v.voxels.resize(n);
    switch (static_cast<NiftiDatatype>(ph.datatype)) {
        case NiftiDatatype::Uint8:
            convert_voxels<std::uint8_t>(raw.data(), n, ph.swap, ph.scl_slope, ph.scl_inter, v.voxels);
            break;
        case NiftiDatatype::Int16:
            convert_voxels<std::int16_t>(raw.data(), n, ph.swap, ph.scl_slope, ph.scl_inter, v.voxels);
            break;
        case NiftiDatatype::Uint16:
            convert_voxels<std::uint16_t>(raw.data(), n, ph.swap, ph.scl_slope, ph.scl_inter, v.voxels);
            break;
        case NiftiDatatype::Int32:
            convert_voxels<std::int32_t>(raw.data(), n, ph.swap, ph.scl_slope, ph.scl_inter, v.voxels);
            break;
        case NiftiDatatype::Float32:
            convert_voxels<float>(raw.data(), n, ph.swap, ph.scl_slope, ph.scl_inter, v.voxels);
            break;
        case NiftiDatatype::Float64:
            convert_voxels<double>(raw.data(), n, ph.swap, ph.scl_slope, ph.scl_inter, v.voxels);
            break;
    }
    return v;
}

template <typename T>
void encode_voxels(const std::vector<double>& in, std::vector<unsigned char>& out) {
    out.resize(in.size() * sizeof(T));
    for (std::size_t i = 0; i < in.size(); ++i) {
        T v;
        if constexpr (std::is_integral_v<T>)
            v = static_cast<T>(std::llround(in[i]));
        else
            v = static_cast<T>(in[i]);
        std::memcpy(out.data() + i * sizeof(T), &v, sizeof(T));
    }
}

void write_file(const std::string& path, const unsigned char* header, std::size_t header_len,
                const unsigned char* data, std::size_t data_len) {
    const bool gz = path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0;
    if (gz) {
        GzHandle f(gzopen(path.c_str(), "wb"));
        if (!f) throw IoError("cannot write " + path);
        if (gzwrite(f.get(), header, static_cast<unsigned>(header_len)) !=
            static_cast<int>(header_len))
            throw IoError("write failed for " + path);
        std::size_t done = 0;
        while (done < data_len) {
            const unsigned chunk = static_cast<unsigned>(std::min<std::size_t>(data_len - done, 1u << 24));
            if (gzwrite(f.get(), data + done, chunk) != static_cast<int>(chunk))
                throw IoError("write failed for " + path);
            done += chunk;
        }
    } else {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw IoError("cannot write " + path);
        f.write(reinterpret_cast<const char*>(header), static_cast<std::streamsize>(header_len));
        f.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(data_len));
        if (!f) throw IoError("write failed for " + path);
    }
}

void save_grid(const GridGeometry& grid, const std::vector<unsigned char>& data,
               NiftiDatatype datatype, const std::string& path) {
    grid.validate();
    unsigned char hdr[kDataOffset];
    std::memset(hdr, 0, sizeof(hdr));

    write_at<std::int32_t>(hdr, kOffSizeofHdr, kHeaderSize);
    write_at<std::int16_t>(hdr, kOffDim, 3);
    for (int a = 0; a < 3; ++a)
        write_at<std::int16_t>(hdr, kOffDim + 2 * (a + 1), static_cast<std::int16_t>(grid.dims[a]));
    for (int i = 4; i < 8; ++i) write_at<std::int16_t>(hdr, kOffDim + 2 * i, 1);
    write_at<std::int16_t>(hdr, kOffDatatype, static_cast<std::int16_t>(datatype));
    write_at<std::int16_t>(hdr, kOffBitpix, static_cast<std::int16_t>(bitpix_for(static_cast<int>(datatype))));
    write_at<float>(hdr, kOffPixdim, 1.0f);
    for (int a = 0; a < 3; ++a)
        write_at<float>(hdr, kOffPixdim + 4 * (a + 1), static_cast<float>(grid.spacing[a]));
    write_at<float>(hdr, kOffVoxOffset, static_cast<float>(kDataOffset));
    write_at<float>(hdr, kOffSclSlope, 1.0f);
    write_at<float>(hdr, kOffSclInter, 0.0f);
    std::memcpy(hdr + kOffDescrip, "radpipe", 7);
    write_at<std::int16_t>(hdr, kOffQformCode, 0);
    write_at<std::int16_t>(hdr, kOffSformCode, 1);
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c)
            write_at<float>(hdr, kOffSrowX + 16 * r + 4 * c,
                            static_cast<float>(grid.orientation[r][c] * grid.spacing[c]));
        write_at<float>(hdr, kOffSrowX + 16 * r + 12, static_cast<float>(grid.origin[r]));
    }
    std::memcpy(hdr + kOffMagic, "n+1", 4);

    if (grid.dims[0] > 32767 || grid.dims[1] > 32767 || grid.dims[2] > 32767)
        throw FormatError("nifti: dims exceed the int16 header field");

    write_file(path, hdr, kDataOffset, data.data(), data.size());
}

}  // namespace

Volume load_volume(const std::string& path) { return load_volume_impl(path); }

Mask load_mask(const std::string& path) {
    const Volume v = load_volume_impl(path);
    Mask m;
    m.grid = v.grid;
    m.voxels.resize(v.voxels.size());
    for (std::size_t i = 0; i < v.voxels.size(); ++i) m.voxels[i] = v.voxels[i] > 0.5 ? 1 : 0;
    return m;
}

void save_volume(const Volume& v, const std::string& path, NiftiDatatype datatype) {
    if (v.voxels.size() != v.grid.voxel_count())
        throw FormatError("nifti: voxel count does not match dims");
    std::vector<unsigned char> data;
    switch (datatype) {
        case NiftiDatatype::Uint8: encode_voxels<std::uint8_t>(v.voxels, data); break;
        case NiftiDatatype::Int16: encode_voxels<std::int16_t>(v.voxels, data); break;
        case NiftiDatatype::Uint16: encode_voxels<std::uint16_t>(v.voxels, data); break;
        case NiftiDatatype::Int32: encode_voxels<std::int32_t>(v.voxels, data); break;
        case NiftiDatatype::Float32: encode_voxels<float>(v.voxels, data); break;
        case NiftiDatatype::Float64: encode_voxels<double>(v.voxels, data); break;
    }
    save_grid(v.grid, data, datatype, path);
}

void save_mask(const Mask& m, const std::string& path) {
    if (m.voxels.size() != m.grid.voxel_count())
        throw FormatError("nifti: voxel count does not match dims");
    std::vector<unsigned char> data(m.voxels.begin(), m.voxels.end());
    save_grid(m.grid, data, NiftiDatatype::Uint8, path);
}

}  // namespace radpipe
