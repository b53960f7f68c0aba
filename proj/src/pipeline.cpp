#include "slovasc/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "slovasc/csv.hpp"
#include "slovasc/errors.hpp"
#include "slovasc/image_io.hpp"
#include "slovasc/overlay.hpp"

namespace slovasc {

namespace fs = std::filesystem;

namespace {

const std::set<std::string, std::less<>> kVesselnessKeys = {
    "vesselness.beta", "vesselness.c", "vesselness.threshold"};
const std::set<std::string, std::less<>> kMetricKeys = {
    "metrics.min_segment_px",         "metrics.fd_min_box",           "metrics.fd_max_box",
    "tortuosity.resample_step_px",    "tortuosity.smoothing_window",  "tortuosity.smoothing_passes",
    "tortuosity.zero_curvature",      "tortuosity.min_turn_px",       "tortuosity.straight_tolerance_px",
    "postprocess.min_area_px",        "postprocess.max_gap_px",       "postprocess.max_angle_deg"};

bool parse_bool(const std::string& key, const std::string& v) {
    std::string t = v;
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
    if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
    if (t == "false" || t == "0" || t == "no" || t == "off") return false;
    throw Error(ErrorCode::InvalidArgument, "config key " + key + " expects a boolean, got '" + v + "'");
}

double parse_number(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const double d = std::strtod(v.c_str(), &end);
    if (v.empty() || !end || *end != '\0' || !std::isfinite(d)) {
        throw Error(ErrorCode::InvalidArgument, "config key " + key + " expects a number, got '" + v + "'");
    }
    return d;
}

fs::path resolve(const fs::path& base, const std::string& v) {
    fs::path p(v);
    return p.is_absolute() || base.empty() ? p : base / p;
}

std::optional<double> find_override(const std::map<std::string, double>& m, const char* key) {
    const auto it = m.find(key);
    if (it == m.end()) return std::nullopt;
    return it->second;
}

std::string format_optional(const std::optional<double>& v) {
    return v ? csv::format_real(*v) : std::string();
}

std::string column_name(VesselMap map, RoiName roi, Metric metric) {
    return std::string(to_string(map)) + "_" + std::string(to_string(roi)) + "_" +
           std::string(to_string(metric));
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    out << text;
    if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

bool is_mask_stem(const std::string& stem) {
    static const char* kSuffixes[] = {"_binary", "_avod", "_fovea", "_binary_corrected",
                                      "_avod_corrected", "_fovea_corrected"};
    for (const char* s : kSuffixes) {
        if (stem.ends_with(s)) return true;
    }
    return false;
}

void write_file_outputs(const fs::path& dir, const ProcessedFile& f, const RunConfig& cfg,
                        const RgbImage& overlay) {
    fs::create_directories(dir);
    const std::string stem = fs::path(f.row.filename).stem().string();

    std::ostringstream results;
    results << "map,roi,metric,value,units\n";
    for (const auto& r : f.row.records) {
        results << to_string(r.map) << ',' << to_string(r.roi) << ',' << to_string(r.metric) << ','
                << csv::format_real(r.value) << ',' << to_string(r.units) << '\n';
    }
    write_text(dir / "results.csv", results.str());

    std::ostringstream meta;
    const auto header = collated_header();
    const auto fields = collated_fields(f.row);
    meta << "field,value\n";
    for (std::size_t i = 0; i < header.size() && i < fields.size(); ++i) {
        if (header[i].starts_with("all_") || header[i].starts_with("artery_") ||
            header[i].starts_with("vein_"))
            break;
        meta << header[i] << ',' << csv::escape(fields[i]) << '\n';
    }
    write_text(dir / "metadata.csv", meta.str());

    if (cfg.save_segmentations) {
        const auto& b = f.bundle;
        if (b.binary_vessel) write_mask(dir / (stem + "_binary.png"), *b.binary_vessel);
        if (b.artery || b.vein || b.optic_disc) {
            write_gray(dir / (stem + "_avod.png"), compose_avod(b, f.image.width(), f.image.height()));
        }
        if (b.fovea) write_mask(dir / (stem + "_fovea.png"), *b.fovea);
    }
    write_rgb(dir / "overlay.png", overlay);
}

void process_into(const fs::path& path, const RunConfig& cfg, const SidecarTable* sidecar,
                  bool write_outputs, ProcessedFile& out) {
    ProcessLog& log = out.log;
    ResultRow& row = out.row;
    row.filename = path.filename().string();
    const std::string stem = path.stem().string();
    log.info("processing " + row.filename);

    LoadedImage loaded = load_image(path, sidecar, &log);
    out.image = std::move(loaded.image);
    row.metadata = loaded.metadata;
    const int w = out.image.width(), h = out.image.height();

    const fs::path masks_dir = cfg.masks_dir.value_or(path.parent_path());
    const fs::path file_dir = cfg.output_dir / stem;
    const std::vector<fs::path> corrected_dirs = {file_dir};
    SegmentationBundle bundle = load_masks(masks_dir, stem, {w, h}, &log, corrected_dirs);
    row.corrected = bundle.corrected;
    if (bundle.corrected) log.info("corrected annotation in use");

    const bool have_vessels = bundle.binary_vessel || bundle.artery || bundle.vein;
    if (!have_vessels) {
        if (cfg.use_fallback_segmentation) {
            bundle.binary_vessel = segment_fallback(out.image, vesselness_params(cfg, w, h), &log);
            row.fallback = true;
        } else {
            log.warn("no vessel masks found and fallback segmentation disabled");
        }
    }

    const PostProcessParams pp = postprocess_params(cfg);
    for (auto* m : {&bundle.binary_vessel, &bundle.artery, &bundle.vein}) {
        if (*m) **m = postprocess_at_working_resolution(**m, pp, &log);
    }
    if (bundle.artery || bundle.vein) {
        BinaryMask all = bundle.binary_vessel.value_or(BinaryMask(w, h));
        if (bundle.artery) all = mask_or(all, *bundle.artery);
        if (bundle.vein) all = mask_or(all, *bundle.vein);
        bundle.binary_vessel = std::move(all);
    }

    if (bundle.fovea) row.fovea = fovea_centroid(*bundle.fovea, &log);
    if (bundle.optic_disc) {
        row.disc = fit_disc_ellipse(*bundle.optic_disc, &log);
    } else {
        log.warn("no optic disc mask; zones skipped");
    }

    bool inferred = false;
    if (row.metadata.laterality == Laterality::Unknown) {
        row.metadata.laterality = infer_laterality(row.fovea, row.disc, &log);
        inferred = inferred || row.metadata.laterality != Laterality::Unknown;
    }
    if (row.metadata.location == Location::Unknown) {
        row.metadata.location = infer_location(row.fovea, row.disc, {w, h}, &log);
        inferred = inferred || row.metadata.location != Location::Unknown;
    }
    if (inferred && row.metadata.source == MetadataSource::Absent) row.metadata.source = MetadataSource::Inferred;
    if (!row.metadata.scale.known) log.warn("pixel scale unknown; lengths reported in px");

    const auto rois = build_zones(row.disc, w, h);
    row.records = measure_all(bundle, row.disc, rois, row.metadata.scale, row.metadata.location,
                              metric_params(cfg, w, h), &log);
    log.info(std::to_string(row.records.size()) + " metric records");
    out.bundle = std::move(bundle);

    if (write_outputs) {
        const RgbImage overlay = render_overlay(out.image, out.bundle, row.fovea, row.disc);
        write_file_outputs(file_dir, out, cfg, overlay);
        const fs::path overlays = cfg.output_dir / "segmentation_overlays";
        fs::create_directories(overlays);
        write_rgb(overlays / (stem + ".png"), overlay);
        write_text(file_dir / "log.txt", log.format());
    }
}

}  // namespace

RunConfig parse_config_text(std::string_view text, const fs::path& base_dir, ProcessLog* log) {
    RunConfig cfg;
    bool have_input = false, have_output = false;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = csv::trim(line);
        if (t.empty() || t.front() == '#') continue;
        if (const auto hash = t.find(" #"); hash != std::string::npos) t = csv::trim(t.substr(0, hash));
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorCode::InvalidArgument, "config line " + std::to_string(line_no) + " lacks '='");
        }
        const std::string key = csv::trim(t.substr(0, eq));
        const std::string value = csv::trim(t.substr(eq + 1));

        if (key == "input_dir") {
            cfg.input_dir = resolve(base_dir, value);
            have_input = !value.empty();
        } else if (key == "output_dir") {
            cfg.output_dir = resolve(base_dir, value);
            have_output = !value.empty();
        } else if (key == "masks_dir") {
            if (!value.empty()) cfg.masks_dir = resolve(base_dir, value);
        } else if (key == "robust_run") {
            cfg.robust_run = parse_bool(key, value);
        } else if (key == "save_segmentations") {
            cfg.save_segmentations = parse_bool(key, value);
        } else if (key == "use_fallback_segmentation") {
            cfg.use_fallback_segmentation = parse_bool(key, value);
        } else if (key == "workers") {
            cfg.workers = std::max(1, static_cast<int>(parse_number(key, value)));
        } else if (key == "vesselness.scales") {
            std::vector<double> scales;
            for (const auto& s : csv::split_line(value)) scales.push_back(parse_number(key, csv::trim(s)));
            cfg.vesselness_scales = std::move(scales);
        } else if (kVesselnessKeys.contains(key)) {
            cfg.vesselness_overrides[key] = parse_number(key, value);
        } else if (kMetricKeys.contains(key)) {
            cfg.metric_overrides[key] = parse_number(key, value);
        } else {
            warn_to(log, "UnknownKey: '" + key + "' ignored");
        }
    }
    if (!have_input) throw Error(ErrorCode::MissingRequiredKey, "input_dir");
    if (!have_output) throw Error(ErrorCode::MissingRequiredKey, "output_dir");
    return cfg;
}

RunConfig parse_config(const fs::path& path, ProcessLog* log) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::UnreadableFile, path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path.parent_path(), log);
}

VesselnessParams vesselness_params(const RunConfig& cfg, int width, int height) {
    VesselnessParams p = VesselnessParams::scaled_to(width, height);
    if (cfg.vesselness_scales) p.scales_px = *cfg.vesselness_scales;
    const auto& o = cfg.vesselness_overrides;
    if (auto v = find_override(o, "vesselness.beta")) p.beta = *v;
    if (auto v = find_override(o, "vesselness.c")) p.c = *v;
    if (auto v = find_override(o, "vesselness.threshold")) p.prob_threshold = *v;
    p.validate();
    return p;
}

MetricParams metric_params(const RunConfig& cfg, int width, int height) {
    MetricParams p = MetricParams::scaled_to(width, height);
    const auto& o = cfg.metric_overrides;
    if (auto v = find_override(o, "metrics.min_segment_px")) p.min_segment_px = static_cast<int>(*v);
    if (auto v = find_override(o, "metrics.fd_min_box")) p.fd_min_box = static_cast<int>(*v);
    if (auto v = find_override(o, "metrics.fd_max_box")) p.fd_max_box = static_cast<int>(*v);
    auto& t = p.tortuosity;
    if (auto v = find_override(o, "tortuosity.resample_step_px")) t.resample_step_px = *v;
    if (auto v = find_override(o, "tortuosity.smoothing_window")) t.smoothing_window = static_cast<int>(*v);
    if (auto v = find_override(o, "tortuosity.smoothing_passes")) t.smoothing_passes = static_cast<int>(*v);
    if (auto v = find_override(o, "tortuosity.zero_curvature")) t.zero_curvature = *v;
    if (auto v = find_override(o, "tortuosity.min_turn_px")) t.min_turn_px = *v;
    if (auto v = find_override(o, "tortuosity.straight_tolerance_px")) t.straight_tolerance_px = *v;
    if (p.min_segment_px < 2 || p.fd_min_box < 1 || p.fd_max_box < p.fd_min_box ||
        !(t.resample_step_px > 0.0) || t.smoothing_window < 1 || t.smoothing_passes < 0) {
        throw Error(ErrorCode::InvalidArgument, "metric parameter override out of range");
    }
    return p;
}

PostProcessParams postprocess_params(const RunConfig& cfg) {
    PostProcessParams p;
    const auto& o = cfg.metric_overrides;
    if (auto v = find_override(o, "postprocess.min_area_px")) p.min_area_px = static_cast<int>(*v);
    if (auto v = find_override(o, "postprocess.max_gap_px")) p.max_gap_px = static_cast<int>(*v);
    if (auto v = find_override(o, "postprocess.max_angle_deg")) p.max_angle_deg = *v;
    return p;
}

std::vector<std::string> metric_columns() {
    std::vector<std::string> cols;
    const RoiName rois[] = {RoiName::WholeImage, RoiName::ZoneB, RoiName::ZoneC};
    const VesselMap maps[] = {VesselMap::AllVessel, VesselMap::Artery, VesselMap::Vein};
    for (RoiName roi : rois) {
        for (VesselMap map : maps) {
            if (roi == RoiName::WholeImage) {
                cols.push_back(column_name(map, roi, Metric::FractalDimension));
                cols.push_back(column_name(map, roi, Metric::VesselDensity));
                cols.push_back(column_name(map, roi, Metric::GlobalCalibre));
            }
            cols.push_back(column_name(map, roi, Metric::LocalCalibre));
            cols.push_back(column_name(map, roi, Metric::TortuosityDensity));
        }
        cols.push_back(column_name(VesselMap::Artery, roi, Metric::CRAE));
        cols.push_back(column_name(VesselMap::Vein, roi, Metric::CRVE));
        cols.push_back(column_name(VesselMap::ArteryVein, roi, Metric::AVR));
    }
    return cols;
}

std::vector<std::string> collated_header() {
    std::vector<std::string> h = {"filename", "laterality", "location",     "metadata_source",
                                  "scale_x",  "scale_y",    "fovea_x",      "fovea_y",
                                  "disc_x",   "disc_y",     "disc_diameter", "length_units",
                                  "corrected", "fallback",  "status"};
    const auto m = metric_columns();
    h.insert(h.end(), m.begin(), m.end());
    return h;
}

std::vector<std::string> collated_fields(const ResultRow& row) {
    const auto& md = row.metadata;
    std::vector<std::string> f = {
        row.filename,
        std::string(to_string(md.laterality)),
        std::string(to_string(md.location)),
        std::string(to_string(md.source)),
        md.scale.known ? csv::format_real(md.scale.microns_per_px_x) : "",
        md.scale.known ? csv::format_real(md.scale.microns_per_px_y) : "",
        format_optional(row.fovea ? std::optional(row.fovea->x) : std::nullopt),
        format_optional(row.fovea ? std::optional(row.fovea->y) : std::nullopt),
        format_optional(row.disc.present ? std::optional(row.disc.centre_x) : std::nullopt),
        format_optional(row.disc.present ? std::optional(row.disc.centre_y) : std::nullopt),
        format_optional(row.disc.present ? std::optional(row.disc.diameter) : std::nullopt),
        md.scale.known ? "um" : "px",
        row.corrected ? "true" : "false",
        row.fallback ? "true" : "false",
        row.failed ? "error" : "ok"};
    std::map<std::string, double> values;
    for (const auto& r : row.records) values[column_name(r.map, r.roi, r.metric)] = r.value;
    for (const auto& col : metric_columns()) {
        const auto it = values.find(col);
        f.push_back(it == values.end() ? "" : csv::format_real(it->second));
    }
    return f;
}

BinaryMask postprocess_at_working_resolution(const BinaryMask& m, const PostProcessParams& p,
                                             ProcessLog* log) {
    if (m.width() == kReferenceDim && m.height() == kReferenceDim) return post_process(m, p);
    RealGrid real(m.width(), m.height());
    for (std::size_t i = 0; i < m.size(); ++i) real.pixels()[i] = m.pixels()[i] ? 1.0 : 0.0;
    const BinaryMask work = threshold(resize(real, kReferenceDim, kReferenceDim, log), 0.5);
    const BinaryMask cleaned = post_process(work, p);
    RealGrid back(kReferenceDim, kReferenceDim);
    for (std::size_t i = 0; i < cleaned.size(); ++i) back.pixels()[i] = cleaned.pixels()[i] ? 1.0 : 0.0;
    return threshold(resize(back, m.width(), m.height()), 0.5);
}

ProcessedFile process_one(const fs::path& path, const RunConfig& cfg, const SidecarTable* sidecar,
                          bool write_outputs) {
    ProcessedFile out;
    process_into(path, cfg, sidecar, write_outputs, out);
    return out;
}

std::vector<fs::path> candidate_files(const fs::path& dir) {
    std::vector<fs::path> files;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
        if (!entry.is_regular_file()) continue;
        const fs::path& p = entry.path();
        std::string ext = p.extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
        if (ext != ".vol" && !is_supported_raster(p)) continue;
        if (is_mask_stem(p.stem().string())) continue;
        files.push_back(p);
    }
    if (ec) throw Error(ErrorCode::IoError, "cannot list " + dir.string() + ": " + ec.message());
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });
    return files;
}

void write_collated(const fs::path& path, const std::vector<ResultRow>& rows) {
    std::vector<const ResultRow*> ordered;
    for (const auto& r : rows) ordered.push_back(&r);
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const ResultRow* a, const ResultRow* b) { return a->filename < b->filename; });
    std::ostringstream out;
    out << csv::join(collated_header()) << '\n';
    for (const auto* r : ordered) out << csv::join(collated_fields(*r)) << '\n';
    write_text(path, out.str());
}

BatchResult run_batch(const RunConfig& cfg) {
    std::error_code ec;
    if (!fs::is_directory(cfg.input_dir, ec)) {
        throw Error(ErrorCode::IoError, "input_dir is not a directory: " + cfg.input_dir.string());
    }
    fs::create_directories(cfg.output_dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create output_dir: " + cfg.output_dir.string());

    const auto files = candidate_files(cfg.input_dir);
    if (files.empty()) throw Error(ErrorCode::EmptyInputDir, cfg.input_dir.string());

    ProcessLog run_log;
    run_log.info("batch of " + std::to_string(files.size()) + " files from " + cfg.input_dir.string());
    const PostProcessParams pp = postprocess_params(cfg);
    run_log.info("post-processing at 768x768: min_area_px=" + std::to_string(pp.min_area_px) +
                 " max_gap_px=" + std::to_string(pp.max_gap_px) +
                 " max_angle_deg=" + csv::format_real(pp.max_angle_deg) +
                 "; masks of other sizes are resampled to this resolution and back");

    SidecarTable sidecar;
    const fs::path sidecar_path = cfg.input_dir / "metadata.csv";
    if (fs::is_regular_file(sidecar_path, ec)) {
        sidecar = load_sidecar(sidecar_path, cfg.robust_run, &run_log);
        run_log.info("sidecar metadata: " + std::to_string(sidecar.size()) + " entries");
        std::set<std::string> names;
        for (const auto& p : files) names.insert(p.filename().string());
        for (const auto& [name, md] : sidecar) {
            if (!names.contains(name)) run_log.warn("sidecar row for unknown file '" + name + "' ignored");
        }
    }

    std::vector<ProcessedFile> results(files.size());
    std::vector<std::exception_ptr> failures(files.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> abort{false};
    auto worker = [&] {
        for (std::size_t i = next++; i < files.size() && !abort; i = next++) {
            try {
                process_into(files[i], cfg, &sidecar, true, results[i]);
            } catch (...) {
                failures[i] = std::current_exception();
                if (!cfg.robust_run) abort = true;
            }
        }
    };
    const int n_workers = std::clamp(cfg.workers, 1, static_cast<int>(files.size()));
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    BatchResult batch;
    for (std::size_t i = 0; i < files.size(); ++i) {
        ProcessedFile& f = results[i];
        if (failures[i]) {
            if (!cfg.robust_run) std::rethrow_exception(failures[i]);
            std::string what = "unknown error";
            try {
                std::rethrow_exception(failures[i]);
            } catch (const std::exception& e) {
                what = e.what();
            } catch (...) {
            }
            ResultRow failed;
            failed.filename = files[i].filename().string();
            failed.metadata = f.row.metadata;
            failed.corrected = f.row.corrected;
            failed.fallback = f.row.fallback;
            failed.failed = true;
            failed.error = what;
            f.log.error(what);
            run_log.error(failed.filename + ": " + what);
            const fs::path dir = cfg.output_dir / files[i].stem();
            fs::create_directories(dir, ec);
            try {
                write_text(dir / "log.txt", f.log.format());
            } catch (const Error& e) {
                run_log.error(e.what());
            }
            ++batch.skipped;
            batch.rows.push_back(std::move(failed));
            continue;
        }
        run_log.info(f.row.filename + ": " + std::to_string(f.row.records.size()) + " records, " +
                     std::to_string(f.log.count(LogLevel::Warn)) + " warnings");
        batch.rows.push_back(std::move(f.row));
    }

    batch.collated = cfg.output_dir / "results.csv";
    write_collated(batch.collated, batch.rows);
    run_log.info("processed " + std::to_string(batch.rows.size() - batch.skipped) + " files, skipped " +
                 std::to_string(batch.skipped));
    write_text(cfg.output_dir / "run_log.txt", run_log.format());
    return batch;
}

std::vector<MetricAgreement> compare_results(const fs::path& a, const fs::path& b,
                                             const std::string& pair_on, ProcessLog* log) {
    const csv::Table ta = csv::read(a);
    const csv::Table tb = csv::read(b);
    const int ka = ta.column(pair_on), kb = tb.column(pair_on);
    if (ka < 0 || kb < 0) throw Error(ErrorCode::InvalidArgument, "pair column '" + pair_on + "' missing");

    std::map<std::string, const std::vector<std::string>*> rows_b;
    for (const auto& r : tb.rows) {
        if (static_cast<int>(r.size()) <= kb) continue;
        if (!rows_b.emplace(r[kb], &r).second) warn_to(log, "duplicate key '" + r[kb] + "' in " + b.string());
    }

    auto number = [](const std::vector<std::string>& row, int col) -> std::optional<double> {
        if (col < 0 || col >= static_cast<int>(row.size()) || row[col].empty()) return std::nullopt;
        char* end = nullptr;
        const double v = std::strtod(row[col].c_str(), &end);
        if (!end || *end != '\0' || !std::isfinite(v)) return std::nullopt;
        return v;
    };

    std::vector<MetricAgreement> out;
    for (const auto& metric : metric_columns()) {
        const int ca = ta.column(metric), cb = tb.column(metric);
        if (ca < 0 || cb < 0) continue;
        PairedSeries series;
        std::set<std::string> seen;
        for (const auto& r : ta.rows) {
            if (static_cast<int>(r.size()) <= ka || !seen.insert(r[ka]).second) continue;
            const auto it = rows_b.find(r[ka]);
            if (it == rows_b.end()) continue;
            const auto va = number(r, ca), vb = number(*it->second, cb);
            if (!va || !vb) continue;
            series.a.push_back(*va);
            series.b.push_back(*vb);
            series.eye_ids.push_back(r[ka]);
        }
        if (series.a.size() < 2) {
            if (!series.a.empty()) warn_to(log, metric + ": fewer than two complete pairs");
            continue;
        }
        out.push_back({metric, agreement(series)});
    }
    return out;
}

std::string format_agreement_table(const std::vector<MetricAgreement>& rows) {
    std::ostringstream out;
    out << "metric,n,mae,pearson,spearman,icc_3_1,ba_mean_diff,ba_loa_low,ba_loa_high,lambda_mean_pct\n";
    for (const auto& [metric, r] : rows) {
        std::optional<double> lambda;
        if (!r.lambda_per_eye.empty()) {
            double s = 0.0;
            for (double v : r.lambda_per_eye) s += v;
            lambda = s / static_cast<double>(r.lambda_per_eye.size());
        }
        out << metric << ',' << r.n << ',' << csv::format_real(r.mae) << ',' << format_optional(r.pearson)
            << ',' << format_optional(r.spearman) << ',' << format_optional(r.icc_3_1) << ','
            << csv::format_real(r.bland_altman.mean_diff) << ',' << csv::format_real(r.bland_altman.loa_low)
            << ',' << csv::format_real(r.bland_altman.loa_high) << ',' << format_optional(lambda) << '\n';
    }
    return out.str();
}

}  // namespace slovasc
