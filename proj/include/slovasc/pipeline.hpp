#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "slovasc/geometry.hpp"
#include "slovasc/ingestion.hpp"
#include "slovasc/metrics.hpp"
#include "slovasc/process_log.hpp"
#include "slovasc/raster.hpp"
#include "slovasc/stats.hpp"
#include "slovasc/vesselness.hpp"

namespace slovasc {

struct RunConfig {
    std::filesystem::path input_dir;
    std::filesystem::path output_dir;
    std::optional<std::filesystem::path> masks_dir;  ///< defaults to input_dir
    bool robust_run = true;
    bool save_segmentations = true;
    bool use_fallback_segmentation = false;
    int workers = 1;
    /// `vesselness.*` keys; applied over the resolution-scaled defaults.
    std::map<std::string, double> vesselness_overrides;
    std::optional<std::vector<double>> vesselness_scales;
    /// `metrics.*`, `tortuosity.*` and `postprocess.*` keys.
    std::map<std::string, double> metric_overrides;
};

/// key=value lines, `#` comments. Relative paths resolve against `base_dir`.
/// Throws MissingRequiredKey; unknown keys are warned about.
RunConfig parse_config_text(std::string_view text, const std::filesystem::path& base_dir,
                            ProcessLog* log = nullptr);
RunConfig parse_config(const std::filesystem::path& path, ProcessLog* log = nullptr);

VesselnessParams vesselness_params(const RunConfig& cfg, int width, int height);
MetricParams metric_params(const RunConfig& cfg, int width, int height);
/// Parameters at the 768 px working resolution.
PostProcessParams postprocess_params(const RunConfig& cfg);

struct ResultRow {
    std::string filename;
    SloMetadata metadata;
    std::optional<FoveaPoint> fovea;
    DiscGeometry disc;
    std::vector<MetricRecord> records;
    bool corrected = false;
    bool fallback = false;
    bool failed = false;
    std::string error;
};

struct ProcessedFile {
    ResultRow row;
    ProcessLog log;
    SegmentationBundle bundle;  ///< post-processed, harmonised masks
    GrayImage image;
};

/// Column names shared by every collated file, in output order.
std::vector<std::string> collated_header();
/// Metric columns `<map>_<roi>_<metric>` of the full matrix.
std::vector<std::string> metric_columns();
std::vector<std::string> collated_fields(const ResultRow& row);

/// Post-processes vessel maps at the 768 px working resolution and returns
/// them at native size. Masks already at 768x768 are processed in place.
BinaryMask postprocess_at_working_resolution(const BinaryMask& m, const PostProcessParams& p,
                                             ProcessLog* log = nullptr);

/// Loads, segments if needed, measures and (when `write_outputs`) writes the
/// per-file artifacts. Throws on failure; the batch decides whether to continue.
ProcessedFile process_one(const std::filesystem::path& path, const RunConfig& cfg,
                          const SidecarTable* sidecar, bool write_outputs = true);

struct BatchResult {
    std::vector<ResultRow> rows;
    std::filesystem::path collated;
    int skipped = 0;
};

/// Image files in `dir` that are not mask rasters, sorted by file name.
std::vector<std::filesystem::path> candidate_files(const std::filesystem::path& dir);

/// Processes every candidate file and writes `<output_dir>/results.csv`,
/// `run_log.txt` and `segmentation_overlays/`. Throws EmptyInputDir; in
/// non-robust mode the first failure propagates.
BatchResult run_batch(const RunConfig& cfg);

void write_collated(const std::filesystem::path& path, const std::vector<ResultRow>& rows);

struct MetricAgreement {
    std::string metric;
    AgreementReport report;
};

/// Pairs rows of two collated files on `pair_on` and reports agreement for
/// every metric column with at least two complete pairs.
std::vector<MetricAgreement> compare_results(const std::filesystem::path& a,
                                             const std::filesystem::path& b,
                                             const std::string& pair_on, ProcessLog* log = nullptr);
std::string format_agreement_table(const std::vector<MetricAgreement>& rows);

}  // namespace slovasc
