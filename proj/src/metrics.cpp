#include "slovasc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "slovasc/errors.hpp"

namespace slovasc {

namespace {

constexpr std::pair<int, int> kStepOrder[8] = {{0, -1}, {1, 0},  {0, 1},  {-1, 0},
                                               {1, -1}, {1, 1}, {-1, 1}, {-1, -1}};

double dist(PointF a, PointF b) { return std::hypot(a.x - b.x, a.y - b.y); }

PointF to_f(Point p) { return {double(p.x), double(p.y)}; }

double polyline_length(std::span<const PointF> pts, std::size_t a, std::size_t b) {
    double len = 0.0;
    for (std::size_t i = a; i < b; ++i) len += dist(pts[i], pts[i + 1]);
    return len;
}

std::vector<PointF> resample(std::span<const PointF> path, double step) {
    std::vector<PointF> out;
    if (path.empty()) return out;
    out.push_back(path.front());
    double carried = 0.0;  // arc length travelled since the last emitted point
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const PointF a = path[i], b = path[i + 1];
        const double seg = dist(a, b);
        double t = step - carried;
        while (t <= seg + 1e-12) {
            const double f = seg > 0 ? t / seg : 0.0;
            out.push_back({a.x + f * (b.x - a.x), a.y + f * (b.y - a.y)});
            t += step;
        }
        carried = seg - (t - step);
    }
    if (dist(out.back(), path.back()) > 1e-9) out.push_back(path.back());
    return out;
}

std::vector<PointF> smooth(std::vector<PointF> pts, int window, int passes) {
    const int half = window / 2;
    const int n = static_cast<int>(pts.size());
    for (int pass = 0; pass < passes; ++pass) {
        std::vector<PointF> next(pts.size());
        for (int i = 0; i < n; ++i) {
            const int h = std::min({half, i, n - 1 - i});
            double sx = 0.0, sy = 0.0;
            for (int k = i - h; k <= i + h; ++k) {
                sx += pts[k].x;
                sy += pts[k].y;
            }
            next[i] = {sx / (2 * h + 1), sy / (2 * h + 1)};
        }
        pts = std::move(next);
    }
    return pts;
}

double max_deviation_from_chord(std::span<const PointF> path) {
    const PointF a = path.front(), b = path.back();
    const double chord = dist(a, b);
    double worst = 0.0;
    for (const auto& p : path) {
        const double d = chord > 1e-12
                             ? std::abs((b.x - a.x) * (a.y - p.y) - (a.x - p.x) * (b.y - a.y)) / chord
                             : dist(a, p);
        worst = std::max(worst, d);
    }
    return worst;
}

struct Run {
    int sign;
    std::size_t first;  // index of first point of the run
    std::size_t last;   // index of last point of the run
};

double scale_length(double px, const PixelScale& scale) {
    return scale.known ? px * scale.linear() : px;
}

Units length_units(const PixelScale& scale) { return scale.known ? Units::Micron : Units::Px; }

}  // namespace

std::string_view to_string(VesselMap v) noexcept {
    switch (v) {
        case VesselMap::AllVessel: return "all";
        case VesselMap::Artery: return "artery";
        case VesselMap::Vein: return "vein";
        case VesselMap::ArteryVein: return "artery_vein";
    }
    return "all";
}

std::string_view to_string(Metric v) noexcept {
    switch (v) {
        case Metric::FractalDimension: return "fractal_dimension";
        case Metric::VesselDensity: return "vessel_density";
        case Metric::GlobalCalibre: return "global_calibre";
        case Metric::LocalCalibre: return "local_calibre";
        case Metric::TortuosityDensity: return "tortuosity_density";
        case Metric::CRAE: return "crae";
        case Metric::CRVE: return "crve";
        case Metric::AVR: return "avr";
    }
    return "";
}

std::string_view to_string(Units v) noexcept {
    switch (v) {
        case Units::Dimensionless: return "dimensionless";
        case Units::Px: return "px";
        case Units::Micron: return "um";
    }
    return "";
}

MetricParams MetricParams::scaled_to(int width, int height) {
    MetricParams p;
    const double s = static_cast<double>(std::min(width, height)) / kReferenceDim;
    p.min_segment_px = std::max(3, static_cast<int>(std::lround(p.min_segment_px * s)));
    return p;
}

double vessel_density(const BinaryMask& m, const RoiMask& roi, ProcessLog* log) {
    const std::size_t area = roi.mask.count();
    if (area == 0) {
        warn_to(log, "EmptyRoi: " + std::string(to_string(roi.name)) + " has no pixels");
        return 0.0;
    }
    return static_cast<double>(mask_and(m, roi.mask).count()) / static_cast<double>(area);
}

double fractal_dimension(const BinaryMask& m, const RoiMask& roi, int min_box, int max_box) {
    const BinaryMask fg = mask_and(m, roi.mask);
    // Box grids start at the corner of the foreground's bounding box.
    int x0 = fg.width(), y0 = fg.height(), x1 = -1, y1 = -1;
    for (int y = 0; y < fg.height(); ++y) {
        for (int x = 0; x < fg.width(); ++x) {
            if (!fg.test(x, y)) continue;
            x0 = std::min(x0, x);
            y0 = std::min(y0, y);
            x1 = std::max(x1, x);
            y1 = std::max(y1, y);
        }
    }
    if (!fg.any()) throw Error(ErrorCode::EmptyMask, "no vessel pixels inside the ROI");

    std::vector<double> xs, ys;
    for (int eps = std::max(1, min_box); eps <= max_box; eps *= 2) {
        const int bw = (x1 - x0) / eps + 1;
        const int bh = (y1 - y0) / eps + 1;
        std::vector<std::uint8_t> hit(static_cast<std::size_t>(bw) * bh, 0);
        std::size_t n = 0;
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                if (!fg.test(x, y)) continue;
                auto& h = hit[static_cast<std::size_t>((y - y0) / eps) * bw + (x - x0) / eps];
                if (!h) {
                    h = 1;
                    ++n;
                }
            }
        }
        if (n > 1) {
            xs.push_back(std::log(1.0 / eps));
            ys.push_back(std::log(static_cast<double>(n)));
        }
    }
    if (xs.size() < 2) throw Error(ErrorCode::TooFewScales, "fewer than two unsaturated box sizes");

    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    return sxy / sxx;
}

double global_calibre(const BinaryMask& m, const Skeleton& skel, const RoiMask& roi,
                      const PixelScale& scale) {
    const std::size_t sk = mask_and(skel.mask, roi.mask).count();
    if (sk == 0) throw Error(ErrorCode::EmptySkeleton, "no skeleton pixels inside the ROI");
    const double px = static_cast<double>(mask_and(m, roi.mask).count()) / static_cast<double>(sk);
    return scale_length(px, scale);
}

namespace {

// Bilinear mask occupancy; pixels outside the image count as background.
double occupancy(const BinaryMask& m, double x, double y) {
    const int x0 = static_cast<int>(std::floor(x)), y0 = static_cast<int>(std::floor(y));
    const double fx = x - x0, fy = y - y0;
    auto at = [&](int xx, int yy) { return m.test_or(xx, yy) ? 1.0 : 0.0; };
    const double top = at(x0, y0) * (1 - fx) + at(x0 + 1, y0) * fx;
    const double bottom = at(x0, y0 + 1) * (1 - fx) + at(x0 + 1, y0 + 1) * fx;
    return top * (1 - fy) + bottom * fy;
}

// Distance from p along (ux, uy) to the first 0.5 crossing of the occupancy profile.
double half_width(const BinaryMask& m, Point p, double ux, double uy) {
    constexpr double kStep = 0.1;
    const double limit = m.width() + m.height();
    double prev = occupancy(m, p.x, p.y);
    for (double t = kStep; t < limit; t += kStep) {
        const double v = occupancy(m, p.x + t * ux, p.y + t * uy);
        if (v < 0.5) return prev > v ? t - kStep + kStep * (prev - 0.5) / (prev - v) : t;
        prev = v;
    }
    return limit;
}

}  // namespace

double calibre_at(const BinaryMask& vessels, Point p, PointF normal) {
    if (!vessels.test_or(p.x, p.y)) return 1.0;
    const double len = std::hypot(normal.x, normal.y);
    if (len > 0.0) {
        const double ux = normal.x / len, uy = normal.y / len;
        return std::max(1.0, half_width(vessels, p, ux, uy) + half_width(vessels, p, -ux, -uy));
    }
    // No usable direction: narrowest of eight profiles.
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 8; ++k) {
        const double a = k * std::numbers::pi / 8;
        best = std::min(best, half_width(vessels, p, std::cos(a), std::sin(a)) +
                                  half_width(vessels, p, -std::cos(a), -std::sin(a)));
    }
    return std::max(1.0, best);
}

SegmentGraph decompose_segments(const Skeleton& skel, const DiscGeometry* disc, const BinaryMask& vessels,
                                int min_segment_px) {
    const int w = skel.mask.width(), h = skel.mask.height();
    BinaryMask s = skel.mask;
    if (disc && disc->present) s = mask_and_not(s, disc_interior(*disc, w, h));

    SegmentGraph g;
    BinaryMask junction(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!s.test(x, y)) continue;
            const int deg = neighbour_count(s, x, y);
            if (deg >= 3) junction.set(x, y);
            if (deg == 1) g.end_points.push_back({x, y});
        }
    }

    // One representative per junction cluster: the member nearest the cluster centroid.
    const ComponentLabels clusters = label_components(junction);
    {
        const int n = clusters.count();
        std::vector<double> sx(n, 0.0), sy(n, 0.0);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                if (const int l = clusters.labels(x, y); l > 0) {
                    sx[l - 1] += x;
                    sy[l - 1] += y;
                }
        std::vector<Point> best(n);
        std::vector<double> best_d(n, std::numeric_limits<double>::infinity());
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                if (const int l = clusters.labels(x, y); l > 0) {
                    const double a = static_cast<double>(clusters.areas[l - 1]);
                    const double d = std::hypot(x - sx[l - 1] / a, y - sy[l - 1] / a);
                    if (d < best_d[l - 1]) {
                        best_d[l - 1] = d;
                        best[l - 1] = {x, y};
                    }
                }
        g.branch_points = std::move(best);
    }

    const BinaryMask edge = mask_and_not(s, junction);
    BinaryMask visited(w, h);
    auto next_from = [&](Point p) -> std::optional<Point> {
        for (const auto& [dx, dy] : kStepOrder) {
            const int nx = p.x + dx, ny = p.y + dy;
            if (edge.test_or(nx, ny) && !visited.test(nx, ny)) return Point{nx, ny};
        }
        return std::nullopt;
    };
    auto walk = [&](Point start) {
        std::vector<Point> out;
        Point cur = start;
        while (auto nxt = next_from(cur)) {
            visited.set(nxt->x, nxt->y);
            out.push_back(*nxt);
            cur = *nxt;
        }
        return out;
    };
    auto adjacent_junction = [&](Point p) -> std::optional<Point> {
        for (const auto& [dx, dy] : kStepOrder) {
            if (junction.test_or(p.x + dx, p.y + dy)) return Point{p.x + dx, p.y + dy};
        }
        return std::nullopt;
    };

    auto trace = [&](Point start) {
        visited.set(start.x, start.y);
        std::vector<Point> forward = walk(start);
        std::vector<Point> backward = walk(start);
        std::vector<Point> path(backward.rbegin(), backward.rend());
        path.push_back(start);
        path.insert(path.end(), forward.begin(), forward.end());
        if (auto j = adjacent_junction(path.front())) path.insert(path.begin(), *j);
        if (auto j = adjacent_junction(path.back()); j && (path.size() > 1 || !(*j == path.front()))) {
            path.push_back(*j);
        }
        if (static_cast<int>(path.size()) < min_segment_px) return;

        VesselSegment seg;
        seg.path = std::move(path);
        const std::size_t n = seg.path.size();
        for (std::size_t i = 0; i + 1 < n; ++i) seg.arc_length += dist(to_f(seg.path[i]), to_f(seg.path[i + 1]));
        seg.chord_length = dist(to_f(seg.path.front()), to_f(seg.path.back()));
        seg.calibre_samples.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            const Point a = seg.path[i >= 2 ? i - 2 : 0];
            const Point b = seg.path[std::min(i + 2, n - 1)];
            const PointF normal{-(double(b.y) - a.y), double(b.x) - a.x};
            seg.calibre_samples.push_back(calibre_at(vessels, seg.path[i], normal));
        }
        seg.mean_calibre = std::accumulate(seg.calibre_samples.begin(), seg.calibre_samples.end(), 0.0) /
                           static_cast<double>(n);
        g.segments.push_back(std::move(seg));
    };

    auto edge_degree = [&](int x, int y) {
        int d = 0;
        for (const auto& [dx, dy] : kNeighbours8) d += edge.test_or(x + dx, y + dy) ? 1 : 0;
        return d;
    };
    // Open chains first, from their ends; what remains are closed loops.
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (edge.test(x, y) && !visited.test(x, y) && edge_degree(x, y) <= 1) trace({x, y});
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (edge.test(x, y) && !visited.test(x, y)) trace({x, y});
    return g;
}

double local_calibre(const SegmentGraph& g, const RoiMask& roi, const PixelScale& scale) {
    double total = 0.0;
    std::size_t used = 0;
    for (const auto& seg : g.segments) {
        double sum = 0.0;
        std::size_t n = 0;
        for (std::size_t i = 0; i < seg.path.size(); ++i) {
            if (!roi.mask.test(seg.path[i].x, seg.path[i].y)) continue;
            sum += seg.calibre_samples[i];
            ++n;
        }
        if (n == 0) continue;
        total += sum / static_cast<double>(n);
        ++used;
    }
    if (used == 0) throw Error(ErrorCode::NoSegmentsInRoi, "no vessel segments inside the ROI");
    return scale_length(total / static_cast<double>(used), scale);
}

TortuosityResult tortuosity_density(std::span<const PointF> path, const TortuosityParams& p) {
    if (path.size() < 3 || max_deviation_from_chord(path) <= p.straight_tolerance_px) return {};

    const std::vector<PointF> pts = resample(path, p.resample_step_px);
    const std::size_t n = pts.size();
    if (n < 5) return {};
    const std::vector<PointF> sm = smooth(pts, p.smoothing_window, p.smoothing_passes);

    std::vector<int> sign(n, 0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double dx = (sm[i + 1].x - sm[i - 1].x) / 2.0;
        const double dy = (sm[i + 1].y - sm[i - 1].y) / 2.0;
        const double ddx = sm[i + 1].x - 2.0 * sm[i].x + sm[i - 1].x;
        const double ddy = sm[i + 1].y - 2.0 * sm[i].y + sm[i - 1].y;
        const double speed = std::hypot(dx, dy);
        if (speed <= 0.0) continue;
        // Curvature per pixel: derivatives are per resampling step.
        const double kappa = (dx * ddy - dy * ddx) / (speed * speed * speed) / p.resample_step_px;
        if (std::abs(kappa) >= p.zero_curvature) sign[i] = kappa > 0 ? 1 : -1;
    }
    // Unsigned points join the preceding turn (or the following one at the start).
    int last = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (sign[i] != 0) {
            last = sign[i];
        } else {
            sign[i] = last;
        }
    }
    if (last == 0) return {};
    int first = 0;
    for (std::size_t i = 0; i < n && first == 0; ++i) first = sign[i];
    for (std::size_t i = 0; i < n && sign[i] == 0; ++i) sign[i] = first;

    std::vector<Run> runs;
    for (std::size_t i = 0; i < n; ++i) {
        if (runs.empty() || runs.back().sign != sign[i]) {
            runs.push_back({sign[i], i, i});
        } else {
            runs.back().last = i;
        }
    }
    // Turn i spans from its first point to the first point of turn i + 1.
    auto span_end = [&](std::size_t r) { return r + 1 < runs.size() ? runs[r + 1].first : n - 1; };
    auto run_length = [&](std::size_t r) { return polyline_length(sm, runs[r].first, span_end(r)); };

    while (runs.size() > 1) {
        std::size_t shortest = 0;
        double shortest_len = run_length(0);
        for (std::size_t r = 1; r < runs.size(); ++r) {
            const double len = run_length(r);
            if (len < shortest_len) {
                shortest_len = len;
                shortest = r;
            }
        }
        if (shortest_len >= p.min_turn_px) break;
        if (shortest == 0) {
            runs[1].first = runs[0].first;
            runs.erase(runs.begin());
        } else if (shortest + 1 == runs.size()) {
            runs[shortest - 1].last = runs[shortest].last;
            runs.pop_back();
        } else {
            runs[shortest - 1].last = runs[shortest + 1].last;
            runs.erase(runs.begin() + static_cast<std::ptrdiff_t>(shortest),
                       runs.begin() + static_cast<std::ptrdiff_t>(shortest) + 2);
        }
    }

    TortuosityResult out;
    out.n_turns = static_cast<int>(runs.size());
    if (out.n_turns == 1) return out;
    const double lc = polyline_length(sm, 0, n - 1);
    double sum = 0.0;
    for (std::size_t r = 0; r < runs.size(); ++r) {
        const std::size_t a = runs[r].first, b = span_end(r);
        const double chord = dist(sm[a], sm[b]);
        if (chord <= 1e-12) continue;
        sum += polyline_length(sm, a, b) / chord - 1.0;
    }
    const double k = static_cast<double>(out.n_turns);
    out.tau = (k - 1.0) / k * sum / lc;
    return out;
}

TortuosityResult tortuosity_density(const VesselSegment& seg, const TortuosityParams& p) {
    std::vector<PointF> pts;
    pts.reserve(seg.path.size());
    for (const auto& q : seg.path) pts.push_back(to_f(q));
    return tortuosity_density(pts, p);
}

double roi_tortuosity(const SegmentGraph& g, const RoiMask& roi, int min_segment_px,
                      const TortuosityParams& p) {
    double total = 0.0;
    std::size_t used = 0;
    for (const auto& seg : g.segments) {
        std::size_t best_start = 0, best_len = 0, start = 0, len = 0;
        for (std::size_t i = 0; i < seg.path.size(); ++i) {
            if (roi.mask.test(seg.path[i].x, seg.path[i].y)) {
                if (len == 0) start = i;
                ++len;
                if (len > best_len) {
                    best_len = len;
                    best_start = start;
                }
            } else {
                len = 0;
            }
        }
        if (best_len == 0 || static_cast<int>(best_len) < min_segment_px) continue;
        std::vector<PointF> pts;
        pts.reserve(best_len);
        for (std::size_t i = best_start; i < best_start + best_len; ++i) pts.push_back(to_f(seg.path[i]));
        total += tortuosity_density(pts, p).tau;
        ++used;
    }
    if (used == 0) throw Error(ErrorCode::NoSegmentsInRoi, "no vessel segments long enough inside the ROI");
    return total / static_cast<double>(used);
}

double knudtson_equivalent(std::span<const double> widths, VesselKind kind) {
    if (widths.size() < 2) throw Error(ErrorCode::TooFewVessels, "fewer than two vessel widths");
    for (double v : widths) {
        if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "widths must be positive");
    }
    std::vector<double> w(widths.begin(), widths.end());
    std::sort(w.begin(), w.end(), std::greater<>());
    std::size_t keep = std::min<std::size_t>(6, w.size());
    if (keep < 6 && keep % 2 == 1) --keep;
    w.resize(keep);

    const double c = kind == VesselKind::Artery ? 0.88 : 0.95;
    while (w.size() > 1) {
        std::sort(w.begin(), w.end(), std::greater<>());
        const std::size_t m = w.size();
        std::vector<double> next;
        for (std::size_t i = 0; i < m / 2; ++i) {
            next.push_back(c * std::sqrt(w[i] * w[i] + w[m - 1 - i] * w[m - 1 - i]));
        }
        if (m % 2 == 1) next.push_back(w[m / 2]);
        w = std::move(next);
    }
    return w.front();
}

namespace {

std::vector<double> roi_segment_widths(const SegmentGraph& g, const RoiMask& roi) {
    std::vector<double> widths;
    for (const auto& seg : g.segments) {
        double sum = 0.0;
        std::size_t n = 0;
        for (std::size_t i = 0; i < seg.path.size(); ++i) {
            if (!roi.mask.test(seg.path[i].x, seg.path[i].y)) continue;
            sum += seg.calibre_samples[i];
            ++n;
        }
        if (n > 0) widths.push_back(sum / static_cast<double>(n));
    }
    return widths;
}

}  // namespace

BigVesselEquivalents big_vessel_equivalents(const SegmentGraph* artery, const SegmentGraph* vein,
                                            const RoiMask& roi, const PixelScale& scale,
                                            ProcessLog* log) {
    BigVesselEquivalents out;
    const std::string where = std::string(to_string(roi.name));
    auto equivalent = [&](const SegmentGraph* g, VesselKind kind, const char* name) -> std::optional<double> {
        if (!g) {
            warn_to(log, std::string(name) + " absent at " + where + ": no vessel map");
            return std::nullopt;
        }
        const auto widths = roi_segment_widths(*g, roi);
        try {
            return scale_length(knudtson_equivalent(widths, kind), scale);
        } catch (const Error& e) {
            warn_to(log, std::string(name) + " absent at " + where + ": " + e.what());
            return std::nullopt;
        }
    };
    out.crae = equivalent(artery, VesselKind::Artery, "CRAE");
    out.crve = equivalent(vein, VesselKind::Vein, "CRVE");
    if (out.crae && out.crve) {
        out.avr = *out.crae / *out.crve;
    } else {
        warn_to(log, "AVR absent at " + where + ": CRAE or CRVE missing");
    }
    return out;
}

std::vector<MetricRecord> measure_all(const SegmentationBundle& bundle, const DiscGeometry& disc,
                                      const std::vector<RoiMask>& rois, const PixelScale& scale,
                                      Location location, const MetricParams& params, ProcessLog* log) {
    struct MapData {
        VesselMap map;
        BinaryMask mask;
        Skeleton skel;
        SegmentGraph graph;
    };

    std::vector<MapData> maps;
    const std::pair<VesselMap, const std::optional<BinaryMask>*> sources[] = {
        {VesselMap::AllVessel, &bundle.binary_vessel},
        {VesselMap::Artery, &bundle.artery},
        {VesselMap::Vein, &bundle.vein}};
    for (const auto& [map, src] : sources) {
        if (!*src) {
            warn_to(log, "no " + std::string(to_string(map)) + " vessel map; its metrics are absent");
            continue;
        }
        const BinaryMask& full = **src;
        Skeleton skel = skeletonize(full);
        SegmentGraph graph = decompose_segments(skel, &disc, full, params.min_segment_px);
        graph.source_map = map;
        BinaryMask mask = full;
        if (disc.present) {
            const BinaryMask interior = disc_interior(disc, full.width(), full.height());
            mask = mask_and_not(mask, interior);
            skel.mask = mask_and_not(skel.mask, interior);
        }
        maps.push_back({map, std::move(mask), std::move(skel), std::move(graph)});
    }

    std::vector<MetricRecord> out;
    auto attempt = [&](VesselMap map, RoiName roi, Metric metric, Units units,
                       const std::function<double()>& f) {
        try {
            out.push_back({map, roi, metric, f(), units});
        } catch (const Error& e) {
            warn_to(log, std::string(to_string(map)) + "_" + std::string(to_string(roi)) + "_" +
                             std::string(to_string(metric)) + " absent: " + e.what());
        }
    };

    const Units len_units = length_units(scale);
    for (const auto& roi : rois) {
        if (location == Location::MaculaCentred && roi.name != RoiName::WholeImage) continue;
        for (const auto& md : maps) {
            if (roi.name == RoiName::WholeImage) {
                attempt(md.map, roi.name, Metric::FractalDimension, Units::Dimensionless,
                        [&] { return fractal_dimension(md.mask, roi, params.fd_min_box, params.fd_max_box); });
                attempt(md.map, roi.name, Metric::VesselDensity, Units::Dimensionless,
                        [&] { return vessel_density(md.mask, roi, log); });
                attempt(md.map, roi.name, Metric::GlobalCalibre, len_units,
                        [&] { return global_calibre(md.mask, md.skel, roi, scale); });
            }
            attempt(md.map, roi.name, Metric::LocalCalibre, len_units,
                    [&] { return local_calibre(md.graph, roi, scale); });
            attempt(md.map, roi.name, Metric::TortuosityDensity, Units::Dimensionless,
                    [&] { return roi_tortuosity(md.graph, roi, params.min_segment_px, params.tortuosity); });
        }

        const SegmentGraph* artery = nullptr;
        const SegmentGraph* vein = nullptr;
        for (const auto& md : maps) {
            if (md.map == VesselMap::Artery) artery = &md.graph;
            if (md.map == VesselMap::Vein) vein = &md.graph;
        }
        if (!artery && !vein) continue;
        const auto bve = big_vessel_equivalents(artery, vein, roi, scale, log);
        if (bve.crae) out.push_back({VesselMap::Artery, roi.name, Metric::CRAE, *bve.crae, len_units});
        if (bve.crve) out.push_back({VesselMap::Vein, roi.name, Metric::CRVE, *bve.crve, len_units});
        if (bve.avr) out.push_back({VesselMap::ArteryVein, roi.name, Metric::AVR, *bve.avr, Units::Dimensionless});
    }
    return out;
}

}  // namespace slovasc
