#include "phantom.hpp"

#include <algorithm>
#include <cmath>

#include "slovasc/image_io.hpp"
#include "slovasc/raster.hpp"

namespace slovasc::testing {

namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.14159265358979323846;

double segment_distance(PointF p, PointF a, PointF b) {
    const double vx = b.x - a.x, vy = b.y - a.y;
    const double len2 = vx * vx + vy * vy;
    double t = len2 > 0 ? ((p.x - a.x) * vx + (p.y - a.y) * vy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(p.x - (a.x + t * vx), p.y - (a.y + t * vy));
}

int odd_width(double w) {
    int v = static_cast<int>(std::lround(w));
    if (v % 2 == 0) v += 1;
    return std::max(3, v);
}

struct Walker {
    PointF start;
    double theta0;
    double curvature;  // rad per px
    double wobble_amp;
    double wobble_len;
    double wobble_phase;
};

// Grows a centreline until it leaves the (margin-expanded) image or reaches max_len.
std::vector<PointF> grow(const Walker& w, int size, double max_len) {
    std::vector<PointF> out{w.start};
    PointF p = w.start;
    const double step = 2.0;
    for (double t = step; t <= max_len; t += step) {
        const double theta = w.theta0 + w.curvature * t +
                             w.wobble_amp * std::sin(2.0 * kPi * t / w.wobble_len + w.wobble_phase);
        p = {p.x + step * std::cos(theta), p.y + step * std::sin(theta)};
        out.push_back(p);
        if (p.x < -10 || p.y < -10 || p.x > size + 10 || p.y > size + 10) break;
    }
    return out;
}

double heading_at_end(const std::vector<PointF>& c) {
    const std::size_t n = c.size();
    const PointF a = c[n >= 4 ? n - 4 : 0], b = c[n - 1];
    return std::atan2(b.y - a.y, b.x - a.x);
}

void paint_vessel(const PhantomVessel& v, double contrast, BinaryMask& mask, RealGrid& dark) {
    const double inner = v.width / 2.0;
    const double outer = v.width / 2.0 + 0.5;
    for (std::size_t i = 0; i + 1 < v.centreline.size(); ++i) {
        const PointF a = v.centreline[i], b = v.centreline[i + 1];
        const int x0 = std::max(0, static_cast<int>(std::floor(std::min(a.x, b.x) - outer - 1)));
        const int x1 = std::min(mask.width() - 1, static_cast<int>(std::ceil(std::max(a.x, b.x) + outer + 1)));
        const int y0 = std::max(0, static_cast<int>(std::floor(std::min(a.y, b.y) - outer - 1)));
        const int y1 = std::min(mask.height() - 1, static_cast<int>(std::ceil(std::max(a.y, b.y) + outer + 1)));
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                const double d = segment_distance({double(x), double(y)}, a, b);
                if (d < inner - 1e-9) mask.set(x, y);
                const double k = contrast * std::clamp(outer - d, 0.0, 1.0);
                dark(x, y) = std::max(dark(x, y), k);
            }
        }
    }
}

}  // namespace

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u = 0.0;
    while (u <= 1e-12) u = uniform();
    const double v = uniform();
    const double r = std::sqrt(-2.0 * std::log(u));
    spare_ = r * std::sin(2.0 * kPi * v);
    has_spare_ = true;
    return r * std::cos(2.0 * kPi * v);
}

SegmentationBundle Phantom::bundle() const {
    SegmentationBundle b;
    b.binary_vessel = all_vessels();
    b.artery = artery;
    b.vein = vein;
    b.optic_disc = disc;
    b.fovea = fovea;
    return b;
}

Phantom make_phantom(PhantomKind kind, std::uint32_t seed, int size, bool right_eye) {
    Rng rng(seed);
    const double f = size / 768.0;
    const double c = size / 2.0;
    Phantom ph;
    ph.disc_radius = 45.0 * f * rng.uniform(0.95, 1.05);
    const double offset = 230.0 * f;
    if (kind == PhantomKind::DiscCentred) {
        ph.disc_centre = {c + rng.uniform(-8, 8) * f, c + rng.uniform(-8, 8) * f};
        ph.fovea_centre = {ph.disc_centre.x - offset, ph.disc_centre.y + 12.0 * f};
    } else {
        ph.fovea_centre = {c + rng.uniform(-8, 8) * f, c + rng.uniform(-8, 8) * f};
        ph.disc_centre = {ph.fovea_centre.x + offset, ph.fovea_centre.y - 12.0 * f};
    }

    // Trunks alternate artery / vein. Disc-centred eyes radiate evenly; macula-centred
    // eyes send curved arcades above and below the fovea plus short nasal vessels.
    struct Trunk {
        double theta;
        double curvature;
    };
    std::vector<Trunk> trunks;
    if (kind == PhantomKind::DiscCentred) {
        const double base = rng.uniform(0, kPi / 4);
        for (int k = 0; k < 8; ++k) trunks.push_back({base + k * kPi / 4 + rng.uniform(-0.1, 0.1), 0.0});
    } else {
        trunks = {{-2.05, -0.0016}, {-2.45, -0.0012}, {2.05, 0.0016}, {2.45, 0.0012},
                  {-0.75, 0.0},     {-0.25, 0.0},     {0.25, 0.0},     {0.75, 0.0}};
        for (auto& t : trunks) t.theta += rng.uniform(-0.06, 0.06);
    }

    const double branch_at = (kind == PhantomKind::DiscCentred ? 265.0 : 210.0) * f;
    for (std::size_t k = 0; k < trunks.size(); ++k) {
        const VesselKind vk = k % 2 == 0 ? VesselKind::Artery : VesselKind::Vein;
        const int width = odd_width((vk == VesselKind::Artery ? rng.uniform(8.5, 11.4) : rng.uniform(10.5, 13.4)) * f);
        const PointF start{ph.disc_centre.x + 0.3 * ph.disc_radius * std::cos(trunks[k].theta),
                           ph.disc_centre.y + 0.3 * ph.disc_radius * std::sin(trunks[k].theta)};
        Walker w{start, trunks[k].theta, trunks[k].curvature, 0.12, rng.uniform(130, 220) * f,
                 rng.uniform(0, 2 * kPi)};
        std::vector<PointF> trunk = grow(w, size, branch_at);
        ph.vessels.push_back({trunk, width, vk});
        const PointF end = trunk.back();
        if (end.x < 0 || end.y < 0 || end.x >= size || end.y >= size) continue;
        const double heading = heading_at_end(trunk);
        for (int side : {-1, 1}) {
            const double spread = rng.uniform(0.35, 0.5);
            Walker child{end, heading + side * spread, trunks[k].curvature, 0.1,
                         rng.uniform(110, 200) * f, rng.uniform(0, 2 * kPi)};
            ph.vessels.push_back({grow(child, size, 4.0 * size), odd_width(width * 0.72), vk});
        }
    }

    ph.artery = BinaryMask(size, size);
    ph.vein = BinaryMask(size, size);
    RealGrid dark(size, size, 0.0);
    for (const auto& v : ph.vessels) {
        if (v.kind == VesselKind::Artery) {
            paint_vessel(v, 45.0, ph.artery, dark);
        } else {
            paint_vessel(v, 60.0, ph.vein, dark);
        }
    }

    ph.disc = filled_circle(size, size, ph.disc_centre.x, ph.disc_centre.y, ph.disc_radius);
    ph.fovea = filled_circle(size, size, ph.fovea_centre.x, ph.fovea_centre.y, 12.0 * f);

    double waves[3][4];
    for (auto& wv : waves) {
        wv[0] = rng.uniform(4, 8);                        // amplitude
        wv[1] = rng.uniform(0, 2 * kPi);                  // direction
        wv[2] = rng.uniform(150, 400) * f;                // wavelength
        wv[3] = rng.uniform(0, 2 * kPi);                  // phase
    }
    ph.image = GrayImage(size, size);
    const double sigma_bg = 0.45 * size;
    const double sigma_fovea = 22.0 * f;
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            const double r2 = (x - c) * (x - c) + (y - c) * (y - c);
            double v = 125.0 + 45.0 * std::exp(-r2 / (2 * sigma_bg * sigma_bg));
            for (const auto& wv : waves) {
                const double u = x * std::cos(wv[1]) + y * std::sin(wv[1]);
                v += wv[0] * std::sin(2 * kPi * u / wv[2] + wv[3]);
            }
            const double dd = std::hypot(x - ph.disc_centre.x, y - ph.disc_centre.y);
            v += 55.0 * std::clamp((ph.disc_radius + 1.5 - dd) / 3.0, 0.0, 1.0);
            const double df2 = (x - ph.fovea_centre.x) * (x - ph.fovea_centre.x) +
                               (y - ph.fovea_centre.y) * (y - ph.fovea_centre.y);
            v -= 25.0 * std::exp(-df2 / (2 * sigma_fovea * sigma_fovea));
            v -= dark(x, y);
            v += 5.0 * rng.normal();
            ph.image(x, y) = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
        }
    }

    if (!right_eye) {
        ph.artery = mirror_x(ph.artery);
        ph.vein = mirror_x(ph.vein);
        ph.disc = mirror_x(ph.disc);
        ph.fovea = mirror_x(ph.fovea);
        GrayImage img(size, size);
        for (int y = 0; y < size; ++y)
            for (int x = 0; x < size; ++x) img(x, y) = ph.image(size - 1 - x, y);
        ph.image = std::move(img);
        auto flip = [&](PointF p) { return PointF{size - 1 - p.x, p.y}; };
        ph.disc_centre = flip(ph.disc_centre);
        ph.fovea_centre = flip(ph.fovea_centre);
        for (auto& v : ph.vessels)
            for (auto& p : v.centreline) p = flip(p);
    }
    return ph;
}

void write_phantom(const fs::path& dir, const std::string& stem, const Phantom& p) {
    fs::create_directories(dir);
    write_gray(dir / (stem + ".png"), p.image);
    write_mask(dir / (stem + "_binary.png"), p.all_vessels());
    write_gray(dir / (stem + "_avod.png"), compose_avod(p.bundle(), p.image.width(), p.image.height()));
    write_mask(dir / (stem + "_fovea.png"), p.fovea);
}

BinaryMask rect(int w, int h, int x0, int y0, int rw, int rh) {
    BinaryMask m(w, h);
    for (int y = y0; y < y0 + rh; ++y)
        for (int x = x0; x < x0 + rw; ++x)
            if (m.in_bounds(x, y)) m.set(x, y);
    return m;
}

BinaryMask filled_circle(int w, int h, double cx, double cy, double r) {
    return filled_ellipse(w, h, cx, cy, r, r);
}

BinaryMask filled_ellipse(int w, int h, double cx, double cy, double a, double b, double angle) {
    BinaryMask m(w, h);
    const double ca = std::cos(angle), sa = std::sin(angle);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double dx = x - cx, dy = y - cy;
            const double u = dx * ca + dy * sa, v = -dx * sa + dy * ca;
            if ((u * u) / (a * a) + (v * v) / (b * b) <= 1.0) m.set(x, y);
        }
    }
    return m;
}

BinaryMask sierpinski(int size) {
    BinaryMask m(size, size);
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x)
            if ((x & y) == 0) m.set(x, y);
    return m;
}

BinaryMask tube(int w, int h, const std::vector<PointF>& centreline, int width) {
    BinaryMask m(w, h);
    RealGrid dark(w, h, 0.0);
    paint_vessel({centreline, width, VesselKind::Artery}, 1.0, m, dark);
    return m;
}

std::vector<PointF> rasterize(const std::vector<PointF>& polyline) {
    std::vector<Point> px;
    auto push = [&](double x, double y) {
        const Point p{static_cast<int>(std::lround(x)), static_cast<int>(std::lround(y))};
        if (px.empty() || !(px.back() == p)) px.push_back(p);
    };
    for (std::size_t i = 0; i + 1 < polyline.size(); ++i) {
        const PointF a = polyline[i], b = polyline[i + 1];
        const int steps = std::max(1, static_cast<int>(std::ceil(std::hypot(b.x - a.x, b.y - a.y) * 4)));
        for (int s = 0; s < steps; ++s) push(a.x + (b.x - a.x) * s / steps, a.y + (b.y - a.y) * s / steps);
    }
    if (!polyline.empty()) push(polyline.back().x, polyline.back().y);
    // Drop corner pixels whose neighbours already touch diagonally.
    std::vector<Point> thin;
    for (std::size_t i = 0; i < px.size(); ++i) {
        if (!thin.empty() && i + 1 < px.size() && std::abs(thin.back().x - px[i + 1].x) <= 1 &&
            std::abs(thin.back().y - px[i + 1].y) <= 1)
            continue;
        thin.push_back(px[i]);
    }
    std::vector<PointF> out;
    for (const auto& p : thin) out.push_back({double(p.x), double(p.y)});
    return out;
}

std::vector<PointF> sine_curve(double x0, double cy, double length, double amplitude, double wavelength) {
    std::vector<PointF> out;
    for (double t = 0.0; t <= length + 1e-9; t += 0.25) {
        out.push_back({x0 + t, cy + amplitude * std::sin(2 * kPi * t / wavelength)});
    }
    return out;
}

std::vector<PointF> arc(double cx, double cy, double r, double a0, double a1) {
    std::vector<PointF> out;
    const int steps = std::max(2, static_cast<int>(std::ceil(std::abs(a1 - a0) * r * 4)));
    for (int i = 0; i <= steps; ++i) {
        const double a = a0 + (a1 - a0) * i / steps;
        out.push_back({cx + r * std::cos(a), cy + r * std::sin(a)});
    }
    return out;
}

BinaryMask rotate90(const BinaryMask& m) {
    BinaryMask out(m.height(), m.width());
    for (int y = 0; y < m.height(); ++y)
        for (int x = 0; x < m.width(); ++x)
            if (m.test(x, y)) out.set(m.height() - 1 - y, x);
    return out;
}

GrayImage rotate90(const GrayImage& m) {
    GrayImage out(m.height(), m.width());
    for (int y = 0; y < m.height(); ++y)
        for (int x = 0; x < m.width(); ++x) out(m.height() - 1 - y, x) = m(x, y);
    return out;
}

BinaryMask mirror_x(const BinaryMask& m) {
    BinaryMask out(m.width(), m.height());
    for (int y = 0; y < m.height(); ++y)
        for (int x = 0; x < m.width(); ++x)
            if (m.test(x, y)) out.set(m.width() - 1 - x, y);
    return out;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("slovasc_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace slovasc::testing
