#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "slovasc/grid.hpp"
#include "slovasc/process_log.hpp"
#include "slovasc/vol_format.hpp"

namespace slovasc {

enum class Laterality { Right, Left, Unknown };
enum class Location { MaculaCentred, DiscCentred, Unknown };
enum class MetadataSource { VolHeader, SidecarFile, Inferred, Absent };

std::string_view to_string(Laterality v) noexcept;
std::string_view to_string(Location v) noexcept;
std::string_view to_string(MetadataSource v) noexcept;

/// Accepts R/Right/OD and L/Left/OS, case-insensitive. Empty or unrecognised -> Unknown.
Laterality parse_laterality(std::string_view token);
/// Accepts macula/disc (and the *-centred spellings), case-insensitive.
Location parse_location(std::string_view token);

struct PixelScale {
    double microns_per_px_x = 1.0;
    double microns_per_px_y = 1.0;
    bool known = false;

    static PixelScale unknown() { return {}; }
    static PixelScale isotropic(double microns_per_px) {
        return {microns_per_px, microns_per_px, true};
    }
    /// Single scalar for lengths: geometric mean of the two axes, 1 when unknown.
    double linear() const;

    friend bool operator==(const PixelScale&, const PixelScale&) = default;
};

struct SloMetadata {
    Laterality laterality = Laterality::Unknown;
    Location location = Location::Unknown;
    PixelScale scale;
    MetadataSource source = MetadataSource::Absent;

    friend bool operator==(const SloMetadata&, const SloMetadata&) = default;
};

struct SegmentationBundle {
    std::optional<BinaryMask> binary_vessel;
    std::optional<BinaryMask> artery;
    std::optional<BinaryMask> vein;
    std::optional<BinaryMask> optic_disc;
    std::optional<BinaryMask> fovea;
    bool corrected = false;

    bool empty() const {
        return !binary_vessel && !artery && !vein && !optic_disc && !fovea;
    }
    friend bool operator==(const SegmentationBundle&, const SegmentationBundle&) = default;
};

struct VolImage {
    VolHeader header;
    GrayImage slo;
};

struct LoadedImage {
    GrayImage image;
    SloMetadata metadata;
};

using SidecarTable = std::map<std::string, SloMetadata>;

/// Minimum accepted SLO raster side length.
inline constexpr int kMinImageDim = 32;

VolImage parse_vol(std::span<const std::uint8_t> bytes, ProcessLog* log = nullptr);

/// Metadata carried by a `.vol` header; scale converted mm/px -> um/px.
SloMetadata metadata_from_vol(const VolHeader& header);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);

/// Reads a sidecar table: header row `filename,microns_per_px,laterality,location`.
/// Rows with the wrong column count raise MalformedRow unless `robust`, in which
/// case they are skipped with a warning.
SidecarTable load_sidecar(const std::filesystem::path& path, bool robust = true,
                          ProcessLog* log = nullptr);

/// Loads a raster image or `.vol` container. Sidecar metadata for the file name
/// is applied when `sidecar` has an entry; a `.vol` header wins over a
/// conflicting sidecar laterality (with a warning).
LoadedImage load_image(const std::filesystem::path& path, const SidecarTable* sidecar,
                       ProcessLog* log = nullptr);

/// Same, reading `metadata.csv` next to the image when it exists.
LoadedImage load_image(const std::filesystem::path& path, ProcessLog* log = nullptr);

/// Loads `<stem>_binary`, `<stem>_avod`, `<stem>_fovea` rasters from `dir`.
/// Corrected variants (`<stem>_avod_corrected`, ...) take precedence and are
/// also searched for in `corrected_dirs`.
SegmentationBundle load_masks(const std::filesystem::path& dir, const std::string& stem,
                              std::pair<int, int> image_dims, ProcessLog* log = nullptr,
                              std::span<const std::filesystem::path> corrected_dirs = {});

/// AVOD label raster -> artery / vein / disc masks. Throws InvalidLabelValue for labels > 3.
void split_avod(const GrayImage& labels, SegmentationBundle& bundle);

/// Inverse of split_avod: 0 background, 1 artery, 2 vein, 3 disc (disc wins, then artery).
GrayImage compose_avod(const SegmentationBundle& bundle, int width, int height);

}  // namespace slovasc
