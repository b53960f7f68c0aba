#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "slovasc/grid.hpp"
#include "slovasc/ingestion.hpp"
#include "slovasc/metrics.hpp"

namespace slovasc::testing {

/// Portable uniform / normal draws (std distributions differ between libraries).
class Rng {
public:
    explicit Rng(std::uint32_t seed) : engine_(seed) {}
    double uniform() { return static_cast<double>(engine_() >> 5) / 134217728.0; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double normal();

private:
    std::mt19937 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

struct PhantomVessel {
    std::vector<PointF> centreline;
    int width = 0;  ///< odd, px
    VesselKind kind = VesselKind::Artery;
};

struct Phantom {
    GrayImage image;
    BinaryMask artery, vein, disc, fovea;
    std::vector<PhantomVessel> vessels;
    PointF disc_centre;
    double disc_radius = 0.0;
    PointF fovea_centre;

    BinaryMask all_vessels() const { return mask_or(artery, vein); }
    SegmentationBundle bundle() const;
};

enum class PhantomKind { DiscCentred, MaculaCentred };

/// Synthetic SLO-like eye: bright textured background, dark tapered-free
/// vessel trees leaving the disc, brighter disc, darker fovea, additive noise.
/// `right_eye` places the disc to the image-right of the fovea.
Phantom make_phantom(PhantomKind kind, std::uint32_t seed, int size = 768, bool right_eye = true);

/// Writes `<stem>.png` plus `_binary`, `_avod` and `_fovea` masks into `dir`.
void write_phantom(const std::filesystem::path& dir, const std::string& stem, const Phantom& p);

// Shape fixtures.
BinaryMask rect(int w, int h, int x0, int y0, int rw, int rh);
BinaryMask filled_circle(int w, int h, double cx, double cy, double r);
BinaryMask filled_ellipse(int w, int h, double cx, double cy, double a, double b, double angle = 0.0);
/// (x & y) == 0 Pascal-triangle raster of side `size` (a power of two).
BinaryMask sierpinski(int size);
/// Pixels closer than width / 2 to the polyline.
BinaryMask tube(int w, int h, const std::vector<PointF>& centreline, int width);
/// 8-connected pixel chain through the polyline (rounded, no duplicates).
std::vector<PointF> rasterize(const std::vector<PointF>& polyline);
/// y = cy + amplitude * sin(2 pi x / wavelength) for x in [x0, x0 + length], 0.25 px steps.
std::vector<PointF> sine_curve(double x0, double cy, double length, double amplitude, double wavelength);
/// Counter-clockwise arc, 0.25 px steps.
std::vector<PointF> arc(double cx, double cy, double r, double a0, double a1);

BinaryMask rotate90(const BinaryMask& m);  ///< clockwise
BinaryMask mirror_x(const BinaryMask& m);
GrayImage rotate90(const GrayImage& m);

std::filesystem::path fresh_dir(const std::string& name);

}  // namespace slovasc::testing
