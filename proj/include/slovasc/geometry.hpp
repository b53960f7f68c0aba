#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "slovasc/grid.hpp"
#include "slovasc/ingestion.hpp"
#include "slovasc/process_log.hpp"

namespace slovasc {

struct FoveaPoint {
    double x = 0.0;
    double y = 0.0;
};

/// Optic disc modelled as an ellipse. Axis lengths are full lengths, so
/// diameter = (major_axis + minor_axis) / 2.
struct DiscGeometry {
    double centre_x = 0.0;
    double centre_y = 0.0;
    double diameter = 0.0;
    double major_axis = 0.0;
    double minor_axis = 0.0;
    double orientation_rad = 0.0;  ///< direction of the major axis
    bool present = false;

    double radius() const noexcept { return diameter / 2.0; }
    static DiscGeometry circle(double cx, double cy, double diameter);
};

enum class RoiName { WholeImage, ZoneB, ZoneC };
std::string_view to_string(RoiName roi) noexcept;

struct RoiMask {
    RoiName name = RoiName::WholeImage;
    BinaryMask mask;
};

/// Ellipse in centre / semi-axis form.
struct Ellipse {
    double cx = 0.0;
    double cy = 0.0;
    double semi_major = 0.0;
    double semi_minor = 0.0;
    double angle_rad = 0.0;
};

/// Direct least-squares ellipse fit (numerically stable Halir-Flusser form of
/// Fitzgibbon's constrained conic fit). nullopt when the points are collinear
/// or the best conic is not an ellipse.
std::optional<Ellipse> fit_ellipse(std::span<const PointF> points);

/// Mean of foreground pixel coordinates; nullopt (with a warning) for an empty
/// mask. Multi-component masks use the union and always warn.
std::optional<FoveaPoint> fovea_centroid(const BinaryMask& fovea_mask, ProcessLog* log = nullptr);

/// Fits the boundary of the largest disc component. present=false (with a
/// warning) when the mask is empty, too small, or the fit degenerates.
DiscGeometry fit_disc_ellipse(const BinaryMask& disc_mask, ProcessLog* log = nullptr);

/// Pixels inside the fitted ellipse or within the mean radius of its centre.
BinaryMask disc_interior(const DiscGeometry& disc, int width, int height);

/// WholeImage always; ZoneB and ZoneC when the disc is present. With r = D/2
/// measured from the disc centre: ZoneB = [r + 0.5D, r + 1.0D],
/// ZoneC = [r, r + 2.0D], clipped to the image and excluding the disc interior.
std::vector<RoiMask> build_zones(const DiscGeometry& disc, int width, int height);

/// Right iff the disc centre lies to the image-right of the fovea.
Laterality infer_laterality(const std::optional<FoveaPoint>& fovea, const DiscGeometry& disc,
                            ProcessLog* log = nullptr);

/// The landmark nearer the image centre decides; exact ties are Unknown. With
/// a single landmark, one within a quarter of the short side from the centre
/// names its own location, otherwise the image is taken to be centred on the
/// other landmark.
Location infer_location(const std::optional<FoveaPoint>& fovea, const DiscGeometry& disc,
                        std::pair<int, int> dims, ProcessLog* log = nullptr);

}  // namespace slovasc
