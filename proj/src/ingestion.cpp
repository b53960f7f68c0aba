#include "slovasc/ingestion.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>

#include "slovasc/csv.hpp"
#include "slovasc/errors.hpp"
#include "slovasc/image_io.hpp"
#include "slovasc/raster.hpp"

namespace slovasc {

namespace fs = std::filesystem;

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

constexpr std::array<std::string_view, 6> kMaskExtensions = {".png", ".bmp", ".tif",
                                                             ".tiff", ".jpg", ".jpeg"};

std::optional<fs::path> find_raster(const fs::path& dir, const std::string& name) {
    std::error_code ec;
    for (auto ext : kMaskExtensions) {
        fs::path p = dir / (name + std::string(ext));
        if (fs::is_regular_file(p, ec)) return p;
    }
    return std::nullopt;
}

GrayImage conform(GrayImage raster, std::pair<int, int> dims, const fs::path& source,
                  ProcessLog* log) {
    const auto [w, h] = dims;
    if (raster.width() == w && raster.height() == h) return raster;
    const long long lhs = static_cast<long long>(raster.width()) * h;
    const long long rhs = static_cast<long long>(raster.height()) * w;
    if (lhs != rhs) {
        throw Error(ErrorCode::DimensionMismatch,
                    "mask aspect ratio differs from image: " + source.string());
    }
    warn_to(log, "resizing mask " + source.filename().string() + " to " + std::to_string(w) + "x" +
                     std::to_string(h));
    return resize_nearest(raster, w, h);
}

BinaryMask to_binary(const GrayImage& raster) {
    BinaryMask m(raster.width(), raster.height());
    auto src = raster.pixels();
    auto dst = m.pixels();
    // {0,255} rasters; intermediate values are treated as probabilities thresholded at 0.5.
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] >= 128 ? 1 : 0;
    return m;
}

}  // namespace

std::string_view to_string(Laterality v) noexcept {
    switch (v) {
        case Laterality::Right: return "Right";
        case Laterality::Left: return "Left";
        case Laterality::Unknown: return "Unknown";
    }
    return "Unknown";
}

std::string_view to_string(Location v) noexcept {
    switch (v) {
        case Location::MaculaCentred: return "Macula";
        case Location::DiscCentred: return "Disc";
        case Location::Unknown: return "Unknown";
    }
    return "Unknown";
}

std::string_view to_string(MetadataSource v) noexcept {
    switch (v) {
        case MetadataSource::VolHeader: return "VolHeader";
        case MetadataSource::SidecarFile: return "SidecarFile";
        case MetadataSource::Inferred: return "Inferred";
        case MetadataSource::Absent: return "Absent";
    }
    return "Absent";
}

Laterality parse_laterality(std::string_view token) {
    const std::string t = lower(csv::trim(token));
    if (t == "r" || t == "right" || t == "od") return Laterality::Right;
    if (t == "l" || t == "left" || t == "os") return Laterality::Left;
    return Laterality::Unknown;
}

Location parse_location(std::string_view token) {
    const std::string t = lower(csv::trim(token));
    if (t == "macula" || t == "macula-centred" || t == "macula-centered") return Location::MaculaCentred;
    if (t == "disc" || t == "disc-centred" || t == "disc-centered") return Location::DiscCentred;
    return Location::Unknown;
}

double PixelScale::linear() const {
    return known ? std::sqrt(microns_per_px_x * microns_per_px_y) : 1.0;
}

SloMetadata metadata_from_vol(const VolHeader& header) {
    SloMetadata md;
    md.laterality = parse_laterality(header.scan_position);
    md.scale = {header.scale_x_slo * 1000.0, header.scale_y_slo * 1000.0, true};
    md.source = MetadataSource::VolHeader;
    return md;
}

std::vector<std::uint8_t> read_file_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::UnreadableFile, path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

SidecarTable load_sidecar(const fs::path& path, bool robust, ProcessLog* log) {
    const csv::Table table = csv::read(path);
    std::vector<std::string> header;
    for (const auto& h : table.header) header.push_back(lower(h));
    auto col = [&](std::string_view name) {
        const auto it = std::find(header.begin(), header.end(), name);
        return it == header.end() ? -1 : static_cast<int>(it - header.begin());
    };
    const int c_file = col("filename");
    const int c_scale = col("microns_per_px");
    const int c_lat = col("laterality");
    const int c_loc = col("location");
    if (c_file < 0) throw Error(ErrorCode::MalformedRow, "sidecar header lacks a filename column");

    SidecarTable out;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::string where = path.filename().string() + " row " + std::to_string(r + 2);
        if (row.size() != header.size()) {
            if (!robust) throw Error(ErrorCode::MalformedRow, where + ": wrong column count");
            warn_to(log, "MalformedRow: " + where + " skipped (wrong column count)");
            continue;
        }
        SloMetadata md;
        bool any = false;
        if (c_scale >= 0 && !row[c_scale].empty()) {
            char* end = nullptr;
            const double v = std::strtod(row[c_scale].c_str(), &end);
            if (end && *end == '\0' && std::isfinite(v) && v > 0.0) {
                md.scale = PixelScale::isotropic(v);
                any = true;
            } else if (!robust) {
                throw Error(ErrorCode::MalformedRow, where + ": invalid microns_per_px");
            } else {
                warn_to(log, where + ": invalid microns_per_px '" + row[c_scale] + "' ignored");
            }
        }
        if (c_lat >= 0) {
            md.laterality = parse_laterality(row[c_lat]);
            any = any || md.laterality != Laterality::Unknown;
        }
        if (c_loc >= 0) {
            md.location = parse_location(row[c_loc]);
            any = any || md.location != Location::Unknown;
        }
        md.source = any ? MetadataSource::SidecarFile : MetadataSource::Absent;
        out[row[c_file]] = md;
    }
    return out;
}

LoadedImage load_image(const fs::path& path, const SidecarTable* sidecar, ProcessLog* log) {
    LoadedImage out;
    const std::string name = path.filename().string();
    const SloMetadata* side = nullptr;
    if (sidecar) {
        const auto it = sidecar->find(name);
        if (it != sidecar->end()) side = &it->second;
    }

    if (lower(path.extension().string()) == ".vol") {
        const auto bytes = read_file_bytes(path);
        VolImage vol = parse_vol(bytes, log);
        out.image = std::move(vol.slo);
        out.metadata = metadata_from_vol(vol.header);
        if (side) {
            if (side->laterality != Laterality::Unknown &&
                out.metadata.laterality != Laterality::Unknown &&
                side->laterality != out.metadata.laterality) {
                warn_to(log, "sidecar laterality conflicts with .vol header; using the header value");
            }
            if (out.metadata.laterality == Laterality::Unknown) {
                out.metadata.laterality = side->laterality;
            }
            if (side->scale.known && side->scale != out.metadata.scale) {
                warn_to(log, "sidecar scale conflicts with .vol header; using the header value");
            }
            out.metadata.location = side->location;
        }
        return out;
    }

    if (!is_supported_raster(path)) throw Error(ErrorCode::UnsupportedFormat, name);
    out.image = read_gray(path);
    if (out.image.width() < kMinImageDim || out.image.height() < kMinImageDim) {
        throw Error(ErrorCode::ImageTooSmall, name);
    }
    if (side) {
        out.metadata = *side;
    } else {
        info_to(log, "no sidecar metadata for " + name);
    }
    return out;
}

LoadedImage load_image(const fs::path& path, ProcessLog* log) {
    const fs::path sidecar_path = path.parent_path() / "metadata.csv";
    std::error_code ec;
    if (fs::is_regular_file(sidecar_path, ec)) {
        const SidecarTable table = load_sidecar(sidecar_path, true, log);
        return load_image(path, &table, log);
    }
    return load_image(path, nullptr, log);
}

void split_avod(const GrayImage& labels, SegmentationBundle& bundle) {
    BinaryMask artery(labels.width(), labels.height());
    BinaryMask vein(labels.width(), labels.height());
    BinaryMask disc(labels.width(), labels.height());
    auto src = labels.pixels();
    for (std::size_t i = 0; i < src.size(); ++i) {
        switch (src[i]) {
            case 0: break;
            case 1: artery.pixels()[i] = 1; break;
            case 2: vein.pixels()[i] = 1; break;
            case 3: disc.pixels()[i] = 1; break;
            default:
                throw Error(ErrorCode::InvalidLabelValue,
                            "AVOD label " + std::to_string(src[i]) + " outside {0,1,2,3}");
        }
    }
    bundle.artery = std::move(artery);
    bundle.vein = std::move(vein);
    bundle.optic_disc = std::move(disc);
}

GrayImage compose_avod(const SegmentationBundle& bundle, int width, int height) {
    GrayImage out(width, height, 0);
    auto dst = out.pixels();
    auto paint = [&](const std::optional<BinaryMask>& m, std::uint8_t label) {
        if (!m) return;
        auto src = m->pixels();
        for (std::size_t i = 0; i < dst.size(); ++i)
            if (src[i]) dst[i] = label;
    };
    paint(bundle.vein, 2);
    paint(bundle.artery, 1);
    paint(bundle.optic_disc, 3);
    return out;
}

SegmentationBundle load_masks(const fs::path& dir, const std::string& stem,
                              std::pair<int, int> image_dims, ProcessLog* log,
                              std::span<const fs::path> corrected_dirs) {
    SegmentationBundle bundle;
    auto locate = [&](const std::string& kind) -> std::optional<std::pair<fs::path, bool>> {
        const std::string corrected = stem + "_" + kind + "_corrected";
        if (auto p = find_raster(dir, corrected)) return std::pair{*p, true};
        for (const auto& d : corrected_dirs) {
            if (auto p = find_raster(d, corrected)) return std::pair{*p, true};
        }
        if (auto p = find_raster(dir, stem + "_" + kind)) return std::pair{*p, false};
        return std::nullopt;
    };

    if (auto found = locate("binary")) {
        const auto& [path, corrected] = *found;
        bundle.binary_vessel = to_binary(conform(read_single_channel(path), image_dims, path, log));
        bundle.corrected = bundle.corrected || corrected;
        info_to(log, "loaded binary vessel mask " + path.filename().string());
    }
    if (auto found = locate("avod")) {
        const auto& [path, corrected] = *found;
        split_avod(conform(read_single_channel(path), image_dims, path, log), bundle);
        bundle.corrected = bundle.corrected || corrected;
        info_to(log, "loaded artery/vein/disc labels " + path.filename().string());
    }
    if (auto found = locate("fovea")) {
        const auto& [path, corrected] = *found;
        bundle.fovea = to_binary(conform(read_single_channel(path), image_dims, path, log));
        bundle.corrected = bundle.corrected || corrected;
        info_to(log, "loaded fovea mask " + path.filename().string());
    }
    return bundle;
}

}  // namespace slovasc
