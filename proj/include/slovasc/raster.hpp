#pragma once

#include <utility>
#include <vector>

#include "slovasc/grid.hpp"
#include "slovasc/process_log.hpp"

namespace slovasc {

/// Working resolution the post-processing defaults are calibrated for.
inline constexpr int kReferenceDim = 768;

struct Skeleton {
    BinaryMask mask;  ///< 1-px wide, 8-connected
};

struct ComponentLabels {
    LabelGrid labels;              ///< 0 = background, components numbered from 1 in raster order
    std::vector<std::size_t> areas;  ///< areas[i] is the area of component i + 1
    int count() const noexcept { return static_cast<int>(areas.size()); }
};

/// Post-processing parameters. Defaults are for a 768x768 raster; use `scaled_to`.
struct PostProcessParams {
    int min_area_px = 150;
    int max_gap_px = 10;
    double max_angle_deg = 30.0;

    /// Area threshold scales with (min_dim/768)^2, gap length linearly.
    static PostProcessParams scaled_to(int width, int height);
};

RealGrid to_real(const GrayImage& img);

/// bit = prob >= t. Throws InvalidArgument unless 0 <= t <= 1.
BinaryMask threshold(const RealGrid& prob, double t);

ComponentLabels label_components(const BinaryMask& m);

BinaryMask remove_small_components(const BinaryMask& m, int min_area_px);

/// Keeps only the largest 8-connected component (ties resolved by raster order).
BinaryMask largest_component(const BinaryMask& m);

/// Number of foreground 8-neighbours of (x, y) in `m`.
int neighbour_count(const BinaryMask& m, int x, int y);

/// Sequentialised two-subiteration thinning followed by staircase removal and
/// re-extension of end points eroded by the thinning passes.
Skeleton skeletonize(const BinaryMask& m);

/// Exact Euclidean distance from each foreground pixel centre to the nearest
/// background pixel centre. Background is 0. Pixels outside the raster do not
/// count as background; a mask with no background yields +inf everywhere.
RealGrid distance_transform(const BinaryMask& m);

/// Joins endpoints of distinct components whose gap is at most `max_gap_px`
/// background pixels and whose outward tangents are opposed within
/// `max_angle_deg`. Output is a superset of the input.
BinaryMask bridge_gaps(const BinaryMask& m, int max_gap_px, double max_angle_deg);

/// Small-component removal then gap bridging.
BinaryMask post_process(const BinaryMask& m, const PostProcessParams& p);

/// Bilinear resampling (pixel-centre aligned). NonSquareInput is only logged.
GrayImage resize(const GrayImage& img, int width, int height, ProcessLog* log = nullptr);
RealGrid resize(const RealGrid& img, int width, int height, ProcessLog* log = nullptr);
/// Nearest-neighbour resampling.
BinaryMask resize(const BinaryMask& m, int width, int height, ProcessLog* log = nullptr);
LabelGrid resize_nearest(const LabelGrid& m, int width, int height);
/// Nearest-neighbour resampling of label rasters (no interpolation between labels).
GrayImage resize_nearest(const GrayImage& m, int width, int height);

/// Draws a filled capsule of the given width between two points.
void draw_thick_line(BinaryMask& m, PointF a, PointF b, double width);

}  // namespace slovasc
