#pragma once

#include <optional>

#include "slovasc/geometry.hpp"
#include "slovasc/image_io.hpp"
#include "slovasc/ingestion.hpp"

namespace slovasc {

namespace overlay_colour {
inline constexpr Rgb kArtery = {255, 0, 0};
inline constexpr Rgb kVein = {0, 0, 255};
inline constexpr Rgb kVesselOnly = {255, 165, 0};
inline constexpr Rgb kDisc = {0, 255, 0};
inline constexpr Rgb kFovea = {255, 255, 0};
inline constexpr Rgb kZoneB = {0, 255, 255};
inline constexpr Rgb kZoneC = {255, 0, 255};
}  // namespace overlay_colour

/// Vessel maps blended at alpha 0.5 over the grayscale image; disc outline,
/// fovea crosshair and dashed zone boundaries drawn opaque on top.
RgbImage render_overlay(const GrayImage& img, const SegmentationBundle& bundle,
                        const std::optional<FoveaPoint>& fovea, const DiscGeometry& disc);

}  // namespace slovasc
