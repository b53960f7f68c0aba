#include "slovasc/overlay.hpp"

#include <algorithm>
#include <cmath>

namespace slovasc {

namespace {

constexpr double kPi = 3.14159265358979323846;

void plot(RgbImage& out, double x, double y, const Rgb& c) {
    const int ix = static_cast<int>(std::lround(x));
    const int iy = static_cast<int>(std::lround(y));
    if (out.in_bounds(ix, iy)) out(ix, iy) = c;
}

Rgb blend(const Rgb& base, const Rgb& c) {
    Rgb out;
    for (int i = 0; i < 3; ++i) out[i] = static_cast<std::uint8_t>((base[i] + c[i] + 1) / 2);
    return out;
}

// Samples the ellipse densely enough that consecutive points are < 0.5 px apart.
void draw_ellipse(RgbImage& out, double cx, double cy, double a, double b, double angle,
                  const Rgb& c, double dash_px) {
    const double perimeter = 2.0 * kPi * std::max(a, b);
    const int steps = std::max(16, static_cast<int>(std::ceil(perimeter * 2.0)));
    const double ca = std::cos(angle), sa = std::sin(angle);
    for (int i = 0; i < steps; ++i) {
        if (dash_px > 0.0) {
            const double arc = perimeter * i / steps;
            if (static_cast<long>(arc / dash_px) % 2 == 1) continue;
        }
        const double t = 2.0 * kPi * i / steps;
        const double u = a * std::cos(t), v = b * std::sin(t);
        plot(out, cx + u * ca - v * sa, cy + u * sa + v * ca, c);
    }
}

}  // namespace

RgbImage render_overlay(const GrayImage& img, const SegmentationBundle& bundle,
                        const std::optional<FoveaPoint>& fovea, const DiscGeometry& disc) {
    RgbImage out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            const std::uint8_t g = img(x, y);
            Rgb px{g, g, g};
            if (bundle.artery && bundle.artery->test(x, y)) {
                px = blend(px, overlay_colour::kArtery);
            } else if (bundle.vein && bundle.vein->test(x, y)) {
                px = blend(px, overlay_colour::kVein);
            } else if (bundle.binary_vessel && bundle.binary_vessel->test(x, y)) {
                px = blend(px, overlay_colour::kVesselOnly);
            }
            out(x, y) = px;
        }
    }

    const double unit = std::max(1.0, std::min(img.width(), img.height()) / 768.0);
    if (disc.present) {
        const double r = disc.radius(), d = disc.diameter;
        const double dash = 6.0 * unit;
        draw_ellipse(out, disc.centre_x, disc.centre_y, r + 0.5 * d, r + 0.5 * d, 0.0,
                     overlay_colour::kZoneB, dash);
        draw_ellipse(out, disc.centre_x, disc.centre_y, r + 1.0 * d, r + 1.0 * d, 0.0,
                     overlay_colour::kZoneB, dash);
        draw_ellipse(out, disc.centre_x, disc.centre_y, r + 2.0 * d, r + 2.0 * d, 0.0,
                     overlay_colour::kZoneC, dash);
        draw_ellipse(out, disc.centre_x, disc.centre_y, disc.major_axis / 2.0, disc.minor_axis / 2.0,
                     disc.orientation_rad, overlay_colour::kDisc, 0.0);
    }
    if (fovea) {
        const double arm = 10.0 * unit;
        for (double t = -arm; t <= arm; t += 0.5) {
            plot(out, fovea->x + t, fovea->y, overlay_colour::kFovea);
            plot(out, fovea->x, fovea->y + t, overlay_colour::kFovea);
        }
    }
    return out;
}

}  // namespace slovasc
