#include "slovasc/vol_format.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>

#include "slovasc/errors.hpp"
#include "slovasc/ingestion.hpp"

namespace slovasc {

namespace {

using vol_layout::Field;

std::int32_t read_i32(std::span<const std::uint8_t> b, const Field& f) {
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | b[f.offset + static_cast<std::size_t>(i)];
    return static_cast<std::int32_t>(v);
}

double read_f64(std::span<const std::uint8_t> b, const Field& f) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[f.offset + static_cast<std::size_t>(i)];
    return std::bit_cast<double>(v);
}

std::string read_chars(std::span<const std::uint8_t> b, const Field& f) {
    std::string s;
    for (std::size_t i = 0; i < f.size; ++i) {
        const auto c = static_cast<char>(b[f.offset + i]);
        if (c == '\0') break;
        s += c;
    }
    return s;
}

void write_i32(std::vector<std::uint8_t>& b, const Field& f, std::int32_t value) {
    auto v = static_cast<std::uint32_t>(value);
    for (std::size_t i = 0; i < 4; ++i) {
        b[f.offset + i] = static_cast<std::uint8_t>(v & 0xFF);
        v >>= 8;
    }
}

void write_f64(std::vector<std::uint8_t>& b, const Field& f, double value) {
    auto v = std::bit_cast<std::uint64_t>(value);
    for (std::size_t i = 0; i < 8; ++i) {
        b[f.offset + i] = static_cast<std::uint8_t>(v & 0xFF);
        v >>= 8;
    }
}

void write_chars(std::vector<std::uint8_t>& b, const Field& f, const std::string& s) {
    const std::size_t n = std::min(s.size(), f.size);
    std::memcpy(b.data() + f.offset, s.data(), n);
}

}  // namespace

std::vector<std::uint8_t> write_vol_fixture(const VolHeader& header, const GrayImage& slo) {
    if (slo.width() != header.size_x_slo || slo.height() != header.size_y_slo) {
        throw Error(ErrorCode::InvalidArgument, "SLO raster does not match header dimensions");
    }
    std::vector<std::uint8_t> bytes(vol_layout::kHeaderSize + slo.size(), 0);
    write_chars(bytes, vol_layout::kVersion, header.version_string);
    write_i32(bytes, vol_layout::kSizeXSlo, header.size_x_slo);
    write_i32(bytes, vol_layout::kSizeYSlo, header.size_y_slo);
    write_f64(bytes, vol_layout::kScaleXSlo, header.scale_x_slo);
    write_f64(bytes, vol_layout::kScaleYSlo, header.scale_y_slo);
    write_i32(bytes, vol_layout::kFieldSizeSlo, header.field_size_slo);
    write_chars(bytes, vol_layout::kScanPosition, header.scan_position);
    std::copy(slo.pixels().begin(), slo.pixels().end(),
              bytes.begin() + static_cast<std::ptrdiff_t>(vol_layout::kHeaderSize));
    return bytes;
}

VolImage parse_vol(std::span<const std::uint8_t> bytes, ProcessLog* log) {
    if (bytes.size() < vol_layout::kHeaderSize) {
        throw Error(ErrorCode::TruncatedFile, "file shorter than the 2048-byte header");
    }
    VolImage out;
    VolHeader& h = out.header;
    h.version_string = read_chars(bytes, vol_layout::kVersion);
    if (!h.version_string.starts_with(vol_layout::kMagic)) {
        throw Error(ErrorCode::MalformedHeader, "version magic mismatch");
    }
    h.size_x_slo = read_i32(bytes, vol_layout::kSizeXSlo);
    h.size_y_slo = read_i32(bytes, vol_layout::kSizeYSlo);
    h.scale_x_slo = read_f64(bytes, vol_layout::kScaleXSlo);
    h.scale_y_slo = read_f64(bytes, vol_layout::kScaleYSlo);
    h.field_size_slo = read_i32(bytes, vol_layout::kFieldSizeSlo);
    h.scan_position = read_chars(bytes, vol_layout::kScanPosition);

    if (h.size_x_slo <= 0 || h.size_y_slo <= 0) {
        throw Error(ErrorCode::MalformedHeader, "non-positive SLO dimensions");
    }
    if (h.size_x_slo < kMinImageDim || h.size_y_slo < kMinImageDim) {
        throw Error(ErrorCode::ImageTooSmall, "SLO raster smaller than 32x32");
    }
    if (!(h.scale_x_slo > 0.0) || !(h.scale_y_slo > 0.0) || !std::isfinite(h.scale_x_slo) ||
        !std::isfinite(h.scale_y_slo)) {
        throw Error(ErrorCode::NonPositiveScale, "SLO scale must be positive");
    }
    if (h.scan_position != "OD" && h.scan_position != "OS") {
        warn_to(log, "unrecognised ScanPosition '" + h.scan_position + "' in .vol header");
    }

    const std::size_t raster = static_cast<std::size_t>(h.size_x_slo) *
                               static_cast<std::size_t>(h.size_y_slo);
    if (bytes.size() < vol_layout::kHeaderSize + raster) {
        throw Error(ErrorCode::TruncatedFile, "SLO raster shorter than declared size");
    }
    out.slo = GrayImage(h.size_x_slo, h.size_y_slo);
    const auto src = bytes.subspan(vol_layout::kHeaderSize, raster);
    std::copy(src.begin(), src.end(), out.slo.pixels().begin());
    return out;
}

}  // namespace slovasc
