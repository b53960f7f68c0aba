// Command-line front end: batch/single analysis, results comparison and overlay rendering.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "slovasc/csv.hpp"
#include "slovasc/errors.hpp"
#include "slovasc/image_io.hpp"
#include "slovasc/overlay.hpp"
#include "slovasc/pipeline.hpp"

namespace fs = std::filesystem;
using namespace slovasc;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFatal = 1;
constexpr int kExitSkipped = 2;

void print_warnings(const ProcessLog& log) {
    for (const auto& e : log.entries()) {
        if (e.level != LogLevel::Info) std::cerr << to_string(e.level) << ": " << e.message << '\n';
    }
}

int analyze_batch(const fs::path& config, int workers) {
    ProcessLog log;
    RunConfig cfg = parse_config(config, &log);
    if (workers > 0) cfg.workers = workers;
    print_warnings(log);
    const BatchResult batch = run_batch(cfg);
    std::cout << "wrote " << batch.collated.string() << " (" << batch.rows.size() << " rows, "
              << batch.skipped << " skipped)\n";
    return batch.skipped > 0 ? kExitSkipped : kExitOk;
}

int analyze_single(const fs::path& image, const std::string& masks, const fs::path& output,
                   bool fallback, bool save_masks) {
    RunConfig cfg;
    cfg.input_dir = image.parent_path().empty() ? fs::path(".") : image.parent_path();
    cfg.output_dir = output;
    if (!masks.empty()) cfg.masks_dir = masks;
    cfg.use_fallback_segmentation = fallback;
    cfg.save_segmentations = save_masks;
    cfg.robust_run = false;
    fs::create_directories(cfg.output_dir);

    SidecarTable sidecar;
    const fs::path sidecar_path = cfg.input_dir / "metadata.csv";
    if (fs::is_regular_file(sidecar_path)) sidecar = load_sidecar(sidecar_path);
    const ProcessedFile f = process_one(image, cfg, &sidecar, true);
    print_warnings(f.log);
    const fs::path collated = cfg.output_dir / "results.csv";
    write_collated(collated, {f.row});
    std::cout << "wrote " << collated.string() << " (" << f.row.records.size() << " metric records)\n";
    return kExitOk;
}

int compare(const fs::path& a, const fs::path& b, const std::string& pair_on, const std::string& output) {
    ProcessLog log;
    const auto rows = compare_results(a, b, pair_on, &log);
    print_warnings(log);
    const std::string table = format_agreement_table(rows);
    if (output.empty()) {
        std::cout << table;
    } else {
        std::ofstream out(output, std::ios::binary);
        if (!out) throw Error(ErrorCode::IoError, "cannot write " + output);
        out << table;
    }
    return kExitOk;
}

int render(const fs::path& input, const std::string& masks, std::string output) {
    ProcessLog log;
    const LoadedImage img = load_image(input, &log);
    const fs::path masks_dir = masks.empty() ? input.parent_path() : fs::path(masks);
    const SegmentationBundle bundle =
        load_masks(masks_dir, input.stem().string(), img.image.dims(), &log);
    std::optional<FoveaPoint> fovea;
    if (bundle.fovea) fovea = fovea_centroid(*bundle.fovea, &log);
    DiscGeometry disc;
    if (bundle.optic_disc) disc = fit_disc_ellipse(*bundle.optic_disc, &log);
    if (output.empty()) output = (input.parent_path() / (input.stem().string() + "_overlay.png")).string();
    write_rgb(output, render_overlay(img.image, bundle, fovea, disc));
    print_warnings(log);
    std::cout << "wrote " << output << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SLO retinal vessel analysis"};
    app.require_subcommand(1);

    auto* analyze = app.add_subcommand("analyze", "measure vessel metrics (batch via --config, or one image)");
    std::string config, image, masks, output = "slovasc_out";
    int workers = 0;
    bool fallback = false, no_masks = false;
    analyze->add_option("--config", config, "batch configuration file")->check(CLI::ExistingFile);
    analyze->add_option("image", image, "single image (.vol or raster)")->check(CLI::ExistingFile);
    analyze->add_option("--masks", masks, "directory holding the image's masks")->check(CLI::ExistingDirectory);
    analyze->add_option("--output", output, "output directory for single-image mode");
    analyze->add_option("--workers", workers, "parallel files in batch mode");
    analyze->add_flag("--fallback", fallback, "segment vessels with the vesselness filter when no mask exists");
    analyze->add_flag("--no-save-masks", no_masks, "do not write post-processed masks");
    analyze->callback([&] {
        if (config.empty() == image.empty()) {
            throw CLI::ValidationError("analyze", "give exactly one of --config or an image path");
        }
    });

    auto* cmp = app.add_subcommand("compare", "agreement statistics between two collated results files");
    std::string results_a, results_b, pair_on, cmp_out;
    cmp->add_option("results_a", results_a)->required()->check(CLI::ExistingFile);
    cmp->add_option("results_b", results_b)->required()->check(CLI::ExistingFile);
    cmp->add_option("--pair-on", pair_on, "column identifying matching rows")->required();
    cmp->add_option("--output", cmp_out, "write the table here instead of stdout");

    auto* rnd = app.add_subcommand("render", "draw the segmentation overlay for one image");
    std::string input, render_masks, render_out;
    rnd->add_option("--input", input, "image file")->required()->check(CLI::ExistingFile);
    rnd->add_option("--masks", render_masks, "mask directory (default: next to the image)");
    rnd->add_option("--output", render_out, "overlay path (default: <stem>_overlay.png)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed()) {
            return config.empty() ? analyze_single(image, masks, output, fallback, !no_masks)
                                  : analyze_batch(config, workers);
        }
        if (cmp->parsed()) return compare(results_a, results_b, pair_on, cmp_out);
        if (rnd->parsed()) return render(input, render_masks, render_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFatal;
    }
    return kExitFatal;
}
