#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "slovasc/grid.hpp"

namespace slovasc {

/// File header fields of a Heidelberg HSF-OCT `.vol` container that the SLO
/// reader needs. Scales are stored in mm/px as in the file.
struct VolHeader {
    std::string version_string;  ///< e.g. "HSF-OCT-103"
    int size_x_slo = 0;
    int size_y_slo = 0;
    double scale_x_slo = 0.0;  ///< mm/px
    double scale_y_slo = 0.0;  ///< mm/px
    int field_size_slo = 0;    ///< degrees
    std::string scan_position;  ///< "OD" or "OS"

    friend bool operator==(const VolHeader&, const VolHeader&) = default;
};

namespace vol_layout {

enum class FieldType { Chars, Int32, Float64 };

struct Field {
    std::string_view name;
    std::size_t offset;
    std::size_t size;
    FieldType type;
};

inline constexpr std::size_t kHeaderSize = 2048;
inline constexpr std::string_view kMagic = "HSF-OCT-";

// Offsets in bytes from the start of the file, little-endian. The SLO raster
// (size_x_slo * size_y_slo unsigned bytes, row-major) starts at kHeaderSize.
// Fields not listed here (B-scan geometry, patient/visit identifiers, grid
// data) are neither read nor written.
inline constexpr Field kVersion{"Version", 0, 12, FieldType::Chars};
inline constexpr Field kSizeX{"SizeX", 12, 4, FieldType::Int32};
inline constexpr Field kNumBScans{"NumBScans", 16, 4, FieldType::Int32};
inline constexpr Field kSizeZ{"SizeZ", 20, 4, FieldType::Int32};
inline constexpr Field kScaleX{"ScaleX", 24, 8, FieldType::Float64};
inline constexpr Field kDistance{"Distance", 32, 8, FieldType::Float64};
inline constexpr Field kScaleZ{"ScaleZ", 40, 8, FieldType::Float64};
inline constexpr Field kSizeXSlo{"SizeXSlo", 48, 4, FieldType::Int32};
inline constexpr Field kSizeYSlo{"SizeYSlo", 52, 4, FieldType::Int32};
inline constexpr Field kScaleXSlo{"ScaleXSlo", 56, 8, FieldType::Float64};
inline constexpr Field kScaleYSlo{"ScaleYSlo", 64, 8, FieldType::Float64};
inline constexpr Field kFieldSizeSlo{"FieldSizeSlo", 72, 4, FieldType::Int32};
inline constexpr Field kScanFocus{"ScanFocus", 76, 8, FieldType::Float64};
inline constexpr Field kScanPosition{"ScanPosition", 84, 4, FieldType::Chars};

inline constexpr std::array<Field, 14> kFields = {
    kVersion,  kSizeX,     kNumBScans, kSizeZ,     kScaleX,        kDistance,  kScaleZ,
    kSizeXSlo, kSizeYSlo,  kScaleXSlo, kScaleYSlo, kFieldSizeSlo,  kScanFocus, kScanPosition};

}  // namespace vol_layout

/// Serialises a header and SLO raster into a `.vol` byte image (header + SLO
/// only, no B-scans). Used to build test fixtures from the same offset table
/// the parser reads.
std::vector<std::uint8_t> write_vol_fixture(const VolHeader& header, const GrayImage& slo);

}  // namespace slovasc
