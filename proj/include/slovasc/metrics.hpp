#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "slovasc/geometry.hpp"
#include "slovasc/grid.hpp"
#include "slovasc/ingestion.hpp"
#include "slovasc/process_log.hpp"
#include "slovasc/raster.hpp"

namespace slovasc {

/// ArteryVein labels records derived from both maps (AVR).
enum class VesselMap { AllVessel, Artery, Vein, ArteryVein };
enum class Metric {
    FractalDimension,
    VesselDensity,
    GlobalCalibre,
    LocalCalibre,
    TortuosityDensity,
    CRAE,
    CRVE,
    AVR
};
enum class Units { Dimensionless, Px, Micron };
enum class VesselKind { Artery, Vein };

std::string_view to_string(VesselMap v) noexcept;
std::string_view to_string(Metric v) noexcept;
std::string_view to_string(Units v) noexcept;

struct VesselSegment {
    std::vector<Point> path;
    double arc_length = 0.0;
    double chord_length = 0.0;
    std::vector<double> calibre_samples;  ///< one per path point, px
    double mean_calibre = 0.0;
};

struct SegmentGraph {
    std::vector<Point> branch_points;  ///< one representative pixel per junction cluster
    std::vector<Point> end_points;
    std::vector<VesselSegment> segments;
    VesselMap source_map = VesselMap::AllVessel;
};

struct MetricRecord {
    VesselMap map = VesselMap::AllVessel;
    RoiName roi = RoiName::WholeImage;
    Metric metric = Metric::VesselDensity;
    double value = 0.0;
    Units units = Units::Dimensionless;
};

struct TortuosityResult {
    int n_turns = 1;
    double tau = 0.0;
};

struct BigVesselEquivalents {
    std::optional<double> crae;
    std::optional<double> crve;
    std::optional<double> avr;
};

struct TortuosityParams {
    double resample_step_px = 2.0;
    int smoothing_window = 5;
    int smoothing_passes = 3;
    double zero_curvature = 1e-6;   ///< |kappa| below this (1/px) has no sign
    double min_turn_px = 12.0;      ///< shorter turn curves merge into neighbours
    double straight_tolerance_px = 1.0;  ///< max chord deviation treated as straight
};

struct MetricParams {
    int min_segment_px = 10;
    int fd_min_box = 2;
    int fd_max_box = 256;
    TortuosityParams tortuosity;

    /// min_segment_px scales linearly with min(width, height) / 768.
    static MetricParams scaled_to(int width, int height);
};

double vessel_density(const BinaryMask& m, const RoiMask& roi, ProcessLog* log = nullptr);

/// Box-counting dimension over power-of-two box sizes in [min_box, max_box].
/// Throws EmptyMask or TooFewScales.
double fractal_dimension(const BinaryMask& m, const RoiMask& roi, int min_box = 2,
                         int max_box = 256);

/// |m ∩ roi| / |skel ∩ roi|, times the linear scale when known. Throws EmptySkeleton.
double global_calibre(const BinaryMask& m, const Skeleton& skel, const RoiMask& roi,
                      const PixelScale& scale);

/// Vessel width at skeleton pixel `p`: distance between the two 0.5 crossings
/// of the bilinearly sampled mask along `normal`. At least 1.
double calibre_at(const BinaryMask& vessels, Point p, PointF normal);

/// Splits a skeleton into branch-to-branch / branch-to-end segments. Skeleton
/// pixels inside the disc are removed first. Segments with fewer than
/// `min_segment_px` path pixels are dropped.
SegmentGraph decompose_segments(const Skeleton& skel, const DiscGeometry* disc,
                                const BinaryMask& vessels, int min_segment_px = 10);

/// Per-segment mean of ROI-interior calibre samples, then unweighted mean over
/// segments. Throws NoSegmentsInRoi.
double local_calibre(const SegmentGraph& g, const RoiMask& roi, const PixelScale& scale);

TortuosityResult tortuosity_density(std::span<const PointF> path,
                                    const TortuosityParams& p = {});
TortuosityResult tortuosity_density(const VesselSegment& seg, const TortuosityParams& p = {});

/// Mean tortuosity density over segments, each restricted to its longest
/// contiguous in-ROI run of at least `min_segment_px` pixels. Throws NoSegmentsInRoi.
double roi_tortuosity(const SegmentGraph& g, const RoiMask& roi, int min_segment_px,
                      const TortuosityParams& p = {});

/// Iterative pairwise combination of the six largest widths. Throws TooFewVessels.
double knudtson_equivalent(std::span<const double> widths, VesselKind kind);

/// CRAE / CRVE from ROI-restricted segment mean calibres and their ratio.
BigVesselEquivalents big_vessel_equivalents(const SegmentGraph* artery, const SegmentGraph* vein,
                                            const RoiMask& roi, const PixelScale& scale,
                                            ProcessLog* log = nullptr);

/// Full metric matrix for one image. Macula-centred images are measured over
/// WholeImage only. Metrics that cannot be computed are omitted with a warning.
std::vector<MetricRecord> measure_all(const SegmentationBundle& bundle, const DiscGeometry& disc,
                                      const std::vector<RoiMask>& rois, const PixelScale& scale,
                                      Location location, const MetricParams& params,
                                      ProcessLog* log = nullptr);

}  // namespace slovasc
