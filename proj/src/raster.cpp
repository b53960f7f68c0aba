#include "slovasc/raster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "slovasc/errors.hpp"

namespace slovasc {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Ring p2..p9 in the Zhang-Suen numbering: N, NE, E, SE, S, SW, W, NW.
struct Ring {
    std::uint8_t p[8];

    int count() const noexcept {
        int b = 0;
        for (auto v : p) b += v;
        return b;
    }
    // Number of 0 -> 1 transitions walking the ring clockwise.
    int transitions() const noexcept {
        int a = 0;
        for (int i = 0; i < 8; ++i) a += (p[i] == 0 && p[(i + 1) % 8] == 1) ? 1 : 0;
        return a;
    }
};

Ring ring_at(const BinaryMask& m, int x, int y) {
    Ring r{};
    for (int i = 0; i < 8; ++i) {
        const auto [dx, dy] = kNeighbours8[i];
        r.p[i] = m.test_or(x + dx, y + dy) ? 1 : 0;
    }
    return r;
}

// Foreground ring pixels form a single 8-connected group inside the 3x3 window.
bool ring_single_group(const Ring& r) {
    int groups = 0;
    bool visited[8] = {};
    for (int start = 0; start < 8; ++start) {
        if (!r.p[start] || visited[start]) continue;
        ++groups;
        int stack[8];
        int top = 0;
        stack[top++] = start;
        visited[start] = true;
        while (top > 0) {
            const int i = stack[--top];
            const auto [xi, yi] = kNeighbours8[i];
            for (int j = 0; j < 8; ++j) {
                if (!r.p[j] || visited[j]) continue;
                const auto [xj, yj] = kNeighbours8[j];
                if (std::abs(xi - xj) <= 1 && std::abs(yi - yj) <= 1) {
                    visited[j] = true;
                    stack[top++] = j;
                }
            }
        }
    }
    return groups == 1;
}

void thin_zhang_suen(BinaryMask& s) {
    std::vector<Point> active;
    for (int y = 0; y < s.height(); ++y)
        for (int x = 0; x < s.width(); ++x)
            if (s.test(x, y)) active.push_back({x, y});

    std::vector<Point> marked;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int pass = 0; pass < 2; ++pass) {
            marked.clear();
            for (const auto& p : active) {
                if (!s.test(p.x, p.y)) continue;
                const Ring r = ring_at(s, p.x, p.y);
                const int b = r.count();
                if (b < 2 || b > 6 || r.transitions() != 1) continue;
                const auto& q = r.p;  // q[0]=N q[2]=E q[4]=S q[6]=W
                const bool directional = pass == 0
                                             ? (q[0] * q[2] * q[4] == 0 && q[2] * q[4] * q[6] == 0)
                                             : (q[0] * q[2] * q[6] == 0 && q[0] * q[4] * q[6] == 0);
                if (directional) marked.push_back(p);
            }
            // Deletions are applied one at a time and re-validated against the
            // current raster so that no component can vanish or split.
            for (const auto& p : marked) {
                const Ring r = ring_at(s, p.x, p.y);
                const int b = r.count();
                if (b >= 2 && b <= 6 && r.transitions() == 1) {
                    s.set(p.x, p.y, false);
                    changed = true;
                }
            }
        }
        std::erase_if(active, [&](const Point& p) { return !s.test(p.x, p.y); });
    }
}

// Removes corner pixels of 4-connected staircases so the skeleton is 1 px wide.
void remove_staircases(BinaryMask& s) {
    for (int y = 0; y < s.height(); ++y) {
        for (int x = 0; x < s.width(); ++x) {
            if (!s.test(x, y)) continue;
            const Ring r = ring_at(s, x, y);
            const int b = r.count();
            if (b < 2 || b > 3) continue;
            const auto& q = r.p;
            const bool corner = (q[0] && q[2]) || (q[2] && q[4]) || (q[4] && q[6]) || (q[6] && q[0]);
            if (corner && ring_single_group(r)) s.set(x, y, false);
        }
    }
}

// Walks back from an end point along the skeleton for up to `max_steps` pixels.
std::vector<Point> trace_back(const BinaryMask& s, Point end, int max_steps) {
    std::vector<Point> chain{end};
    Point prev{-1, -1};
    Point cur = end;
    for (int step = 0; step < max_steps; ++step) {
        Point next{-1, -1};
        int found = 0;
        for (const auto& [dx, dy] : kNeighbours8) {
            const Point q{cur.x + dx, cur.y + dy};
            if (q == prev || !s.test_or(q.x, q.y)) continue;
            if (std::find(chain.begin(), chain.end(), q) != chain.end()) continue;
            next = q;
            ++found;
        }
        if (found != 1) break;
        prev = cur;
        cur = next;
        chain.push_back(cur);
        if (neighbour_count(s, cur.x, cur.y) >= 3) break;
    }
    return chain;
}

PointF unit(PointF v) {
    const double n = std::hypot(v.x, v.y);
    return n > 0 ? PointF{v.x / n, v.y / n} : PointF{0, 0};
}

double angle_between_deg(PointF a, PointF b) {
    const double c = std::clamp(a.x * b.x + a.y * b.y, -1.0, 1.0);
    return std::acos(c) * 180.0 / kPi;
}

// Re-grows end points that parallel thinning pulled back from the mask tip.
void extend_end_points(BinaryMask& s, const BinaryMask& m, const RealGrid& edt) {
    std::vector<Point> ends;
    for (int y = 0; y < s.height(); ++y)
        for (int x = 0; x < s.width(); ++x)
            if (s.test(x, y) && neighbour_count(s, x, y) == 1) ends.push_back({x, y});

    for (const Point& e : ends) {
        const auto chain = trace_back(s, e, 6);
        if (chain.size() < 3) continue;
        const PointF dir = unit({static_cast<double>(e.x - chain.back().x),
                                 static_cast<double>(e.y - chain.back().y)});
        // The two 8-directions bracketing `dir`; alternating between them draws a
        // digital line without L-shaped corners.
        const double theta = std::atan2(dir.y, dir.x);
        const double octant = theta / (kPi / 4.0);
        const int lo = static_cast<int>(std::floor(octant));
        auto offset = [](int k) {
            const double a = k * kPi / 4.0;
            return Point{static_cast<int>(std::lround(std::cos(a))),
                         static_cast<int>(std::lround(std::sin(a)))};
        };
        const Point cand[2] = {offset(lo), offset(lo + 1)};

        const double r = edt(e.x, e.y);
        const int max_steps = std::isfinite(r) ? static_cast<int>(std::ceil(r)) + 1 : 0;
        Point prev = e;
        for (int step = 0; step < max_steps; ++step) {
            Point best{};
            double best_perp = std::numeric_limits<double>::infinity();
            for (const auto& c : cand) {
                const Point q{prev.x + c.x, prev.y + c.y};
                const double px = q.x - e.x;
                const double py = q.y - e.y;
                const double perp = std::abs(px * dir.y - py * dir.x);
                if (perp < best_perp) {
                    best_perp = perp;
                    best = q;
                }
            }
            if (!m.test_or(best.x, best.y) || s.test(best.x, best.y)) break;
            bool touches_other = false;
            for (const auto& [dx, dy] : kNeighbours8) {
                const Point n{best.x + dx, best.y + dy};
                if (n != prev && s.test_or(n.x, n.y)) touches_other = true;
            }
            if (touches_other) break;
            s.set(best.x, best.y);
            prev = best;
        }
    }
}

// Exact 1-D squared distance transform (lower envelope of parabolas).
void edt_1d(std::span<const double> f, std::span<double> d, std::vector<int>& v,
            std::vector<double>& z) {
    const int n = static_cast<int>(f.size());
    constexpr double inf = std::numeric_limits<double>::infinity();
    v.assign(static_cast<std::size_t>(n), 0);
    z.assign(static_cast<std::size_t>(n) + 1, 0.0);
    int k = -1;
    for (int q = 0; q < n; ++q) {
        if (!std::isfinite(f[q])) continue;
        if (k < 0) {
            k = 0;
            v[0] = q;
            z[0] = -inf;
            z[1] = inf;
            continue;
        }
        const auto intersect = [&](int p) {
            return ((f[q] + double(q) * q) - (f[p] + double(p) * p)) / (2.0 * q - 2.0 * p);
        };
        double s = intersect(v[k]);
        while (s <= z[k]) {  // z[0] is -inf, so this stops at k == 0
            --k;
            s = intersect(v[k]);
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = inf;
    }
    if (k < 0) {
        std::fill(d.begin(), d.end(), inf);
        return;
    }
    int j = 0;
    for (int q = 0; q < n; ++q) {
        while (z[j + 1] < q) ++j;
        const double dq = q - v[j];
        d[q] = dq * dq + f[v[j]];
    }
}

}  // namespace

PostProcessParams PostProcessParams::scaled_to(int width, int height) {
    const double s = static_cast<double>(std::min(width, height)) / kReferenceDim;
    PostProcessParams p;
    p.min_area_px = static_cast<int>(std::lround(150.0 * s * s));
    p.max_gap_px = std::max(1, static_cast<int>(std::lround(10.0 * s)));
    return p;
}

RealGrid to_real(const GrayImage& img) {
    RealGrid out(img.width(), img.height());
    auto src = img.pixels();
    auto dst = out.pixels();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i];
    return out;
}

BinaryMask threshold(const RealGrid& prob, double t) {
    if (!(t >= 0.0 && t <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "threshold must lie in [0, 1]");
    }
    BinaryMask out(prob.width(), prob.height());
    auto src = prob.pixels();
    auto dst = out.pixels();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] >= t ? 1 : 0;
    return out;
}

ComponentLabels label_components(const BinaryMask& m) {
    ComponentLabels out{LabelGrid(m.width(), m.height(), 0), {}};
    std::vector<Point> stack;
    for (int y = 0; y < m.height(); ++y) {
        for (int x = 0; x < m.width(); ++x) {
            if (!m.test(x, y) || out.labels(x, y) != 0) continue;
            const int label = out.count() + 1;
            std::size_t area = 0;
            stack.push_back({x, y});
            out.labels(x, y) = label;
            while (!stack.empty()) {
                const Point p = stack.back();
                stack.pop_back();
                ++area;
                for (const auto& [dx, dy] : kNeighbours8) {
                    const int nx = p.x + dx;
                    const int ny = p.y + dy;
                    if (m.test_or(nx, ny) && out.labels(nx, ny) == 0) {
                        out.labels(nx, ny) = label;
                        stack.push_back({nx, ny});
                    }
                }
            }
            out.areas.push_back(area);
        }
    }
    return out;
}

BinaryMask remove_small_components(const BinaryMask& m, int min_area_px) {
    if (min_area_px < 0) throw Error(ErrorCode::InvalidArgument, "min_area_px must be >= 0");
    if (min_area_px == 0) return m;
    const auto comps = label_components(m);
    BinaryMask out(m.width(), m.height());
    auto lab = comps.labels.pixels();
    auto dst = out.pixels();
    for (std::size_t i = 0; i < lab.size(); ++i) {
        if (lab[i] > 0 && comps.areas[static_cast<std::size_t>(lab[i] - 1)] >=
                              static_cast<std::size_t>(min_area_px)) {
            dst[i] = 1;
        }
    }
    return out;
}

BinaryMask largest_component(const BinaryMask& m) {
    const auto comps = label_components(m);
    BinaryMask out(m.width(), m.height());
    if (comps.count() == 0) return out;
    const auto it = std::max_element(comps.areas.begin(), comps.areas.end());
    const int keep = static_cast<int>(it - comps.areas.begin()) + 1;
    auto lab = comps.labels.pixels();
    auto dst = out.pixels();
    for (std::size_t i = 0; i < lab.size(); ++i) dst[i] = lab[i] == keep ? 1 : 0;
    return out;
}

int neighbour_count(const BinaryMask& m, int x, int y) {
    int n = 0;
    for (const auto& [dx, dy] : kNeighbours8) n += m.test_or(x + dx, y + dy) ? 1 : 0;
    return n;
}

Skeleton skeletonize(const BinaryMask& m) {
    BinaryMask s = m;
    thin_zhang_suen(s);
    remove_staircases(s);
    extend_end_points(s, m, distance_transform(m));
    return {std::move(s)};
}

RealGrid distance_transform(const BinaryMask& m) {
    const int w = m.width();
    const int h = m.height();
    constexpr double inf = std::numeric_limits<double>::infinity();
    RealGrid sq(w, h);
    std::vector<int> v;
    std::vector<double> z;

    std::vector<double> f(static_cast<std::size_t>(h));
    std::vector<double> d(static_cast<std::size_t>(h));
    for (int x = 0; x < w; ++x) {
        for (int y = 0; y < h; ++y) f[y] = m.test(x, y) ? inf : 0.0;
        edt_1d(f, d, v, z);
        for (int y = 0; y < h; ++y) sq(x, y) = d[y];
    }
    std::vector<double> g(static_cast<std::size_t>(w));
    RealGrid out(w, h);
    for (int y = 0; y < h; ++y) {
        auto row = sq.row(y);
        std::copy(row.begin(), row.end(), g.begin());
        edt_1d(g, out.row(y), v, z);
        for (auto& value : out.row(y)) value = std::sqrt(value);
    }
    return out;
}

void draw_thick_line(BinaryMask& m, PointF a, PointF b, double width) {
    const double radius = std::max(0.0, (width - 1.0) / 2.0);
    const int x0 = static_cast<int>(std::floor(std::min(a.x, b.x) - radius - 1));
    const int x1 = static_cast<int>(std::ceil(std::max(a.x, b.x) + radius + 1));
    const int y0 = static_cast<int>(std::floor(std::min(a.y, b.y) - radius - 1));
    const int y1 = static_cast<int>(std::ceil(std::max(a.y, b.y) + radius + 1));
    const double vx = b.x - a.x;
    const double vy = b.y - a.y;
    const double len2 = vx * vx + vy * vy;
    for (int y = std::max(0, y0); y <= std::min(m.height() - 1, y1); ++y) {
        for (int x = std::max(0, x0); x <= std::min(m.width() - 1, x1); ++x) {
            double t = len2 > 0 ? ((x - a.x) * vx + (y - a.y) * vy) / len2 : 0.0;
            t = std::clamp(t, 0.0, 1.0);
            const double dx = x - (a.x + t * vx);
            const double dy = y - (a.y + t * vy);
            if (dx * dx + dy * dy <= radius * radius + 1e-9) m.set(x, y);
        }
    }
    // Centre line, so width-1 strokes stay 8-connected.
    const int steps = static_cast<int>(std::ceil(std::max(std::abs(vx), std::abs(vy))));
    for (int i = 0; i <= steps; ++i) {
        const double t = steps > 0 ? static_cast<double>(i) / steps : 0.0;
        const int x = static_cast<int>(std::lround(a.x + t * vx));
        const int y = static_cast<int>(std::lround(a.y + t * vy));
        if (m.in_bounds(x, y)) m.set(x, y);
    }
}

BinaryMask bridge_gaps(const BinaryMask& m, int max_gap_px, double max_angle_deg) {
    if (max_gap_px < 0) throw Error(ErrorCode::InvalidArgument, "max_gap_px must be >= 0");
    BinaryMask out = m;
    if (max_gap_px == 0 || !m.any()) return out;

    const auto comps = label_components(m);
    if (comps.count() < 2) return out;
    const RealGrid edt = distance_transform(m);
    const BinaryMask skel = skeletonize(m).mask;

    struct Tip {
        int component;
        PointF tip;
        PointF dir;  // outward tangent
        double calibre;
    };
    std::vector<Tip> tips;
    for (int y = 0; y < skel.height(); ++y) {
        for (int x = 0; x < skel.width(); ++x) {
            if (!skel.test(x, y) || neighbour_count(skel, x, y) != 1) continue;
            const auto chain = trace_back(skel, {x, y}, 8);
            if (chain.size() < 3) continue;
            const PointF dir = unit({static_cast<double>(x - chain.back().x),
                                     static_cast<double>(y - chain.back().y)});
            double max_r = 0.0;
            for (const auto& p : chain) max_r = std::max(max_r, edt(p.x, p.y));
            // Walk outwards to the last foreground pixel along the tangent.
            Point tip{x, y};
            for (double t = 0.5; t < 4.0 * (max_r + 2.0); t += 0.5) {
                const int tx = static_cast<int>(std::lround(x + t * dir.x));
                const int ty = static_cast<int>(std::lround(y + t * dir.y));
                if (!m.test_or(tx, ty)) break;
                tip = {tx, ty};
            }
            tips.push_back({comps.labels(x, y), {double(tip.x), double(tip.y)}, dir,
                            std::max(1.0, 2.0 * max_r - 1.0)});
        }
    }

    struct Candidate {
        double gap;
        std::size_t i, j;
    };
    std::vector<Candidate> candidates;
    for (std::size_t i = 0; i < tips.size(); ++i) {
        for (std::size_t j = i + 1; j < tips.size(); ++j) {
            const Tip& a = tips[i];
            const Tip& b = tips[j];
            if (a.component == b.component) continue;
            const PointF c{b.tip.x - a.tip.x, b.tip.y - a.tip.y};
            const double dist = std::hypot(c.x, c.y);
            if (dist <= 0.0) continue;
            const double gap = dist - 1.0;
            if (gap > max_gap_px) continue;
            const PointF cu = unit(c);
            if (angle_between_deg(a.dir, {-b.dir.x, -b.dir.y}) > max_angle_deg) continue;
            if (angle_between_deg(a.dir, cu) > max_angle_deg) continue;
            if (angle_between_deg(b.dir, {-cu.x, -cu.y}) > max_angle_deg) continue;
            candidates.push_back({gap, i, j});
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.gap != b.gap) return a.gap < b.gap;
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    });

    std::vector<int> parent(static_cast<std::size_t>(comps.count()) + 1);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int c) {
        while (parent[c] != c) c = parent[c] = parent[parent[c]];
        return c;
    };
    std::vector<bool> used(tips.size(), false);
    for (const auto& cand : candidates) {
        if (used[cand.i] || used[cand.j]) continue;
        const int ra = find(tips[cand.i].component);
        const int rb = find(tips[cand.j].component);
        if (ra == rb) continue;
        parent[ra] = rb;
        used[cand.i] = used[cand.j] = true;
        const double width = std::max(1.0, std::round((tips[cand.i].calibre + tips[cand.j].calibre) / 2.0));
        draw_thick_line(out, tips[cand.i].tip, tips[cand.j].tip, width);
    }
    return out;
}

BinaryMask post_process(const BinaryMask& m, const PostProcessParams& p) {
    return bridge_gaps(remove_small_components(m, p.min_area_px), p.max_gap_px, p.max_angle_deg);
}

namespace {

void warn_non_square(int w, int h, ProcessLog* log) {
    if (w != h) {
        warn_to(log, "NonSquareInput: resizing a " + std::to_string(w) + "x" + std::to_string(h) +
                         " raster");
    }
}

void check_target(int width, int height) {
    if (width < 32 || height < 32) {
        throw Error(ErrorCode::InvalidArgument, "resize target must be at least 32x32");
    }
}

template <typename T>
Grid<T> bilinear(const Grid<T>& img, int width, int height) {
    Grid<T> out(width, height);
    const double sx = static_cast<double>(img.width()) / width;
    const double sy = static_cast<double>(img.height()) / height;
    for (int y = 0; y < height; ++y) {
        const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, img.height() - 1.0);
        const int y0 = static_cast<int>(std::floor(fy));
        const int y1 = std::min(y0 + 1, img.height() - 1);
        const double ty = fy - y0;
        for (int x = 0; x < width; ++x) {
            const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, img.width() - 1.0);
            const int x0 = static_cast<int>(std::floor(fx));
            const int x1 = std::min(x0 + 1, img.width() - 1);
            const double tx = fx - x0;
            const double v = (1 - ty) * ((1 - tx) * img(x0, y0) + tx * img(x1, y0)) +
                             ty * ((1 - tx) * img(x0, y1) + tx * img(x1, y1));
            if constexpr (std::is_integral_v<T>) {
                out(x, y) = static_cast<T>(std::clamp(std::lround(v), 0L, 255L));
            } else {
                out(x, y) = static_cast<T>(v);
            }
        }
    }
    return out;
}

template <typename G>
G nearest(const G& img, int width, int height) {
    G out(width, height);
    for (int y = 0; y < height; ++y) {
        const int sy = std::min(img.height() - 1,
                                static_cast<int>(std::floor((y + 0.5) * img.height() / height)));
        for (int x = 0; x < width; ++x) {
            const int sx = std::min(img.width() - 1,
                                    static_cast<int>(std::floor((x + 0.5) * img.width() / width)));
            out(x, y) = img(sx, sy);
        }
    }
    return out;
}

}  // namespace

GrayImage resize(const GrayImage& img, int width, int height, ProcessLog* log) {
    check_target(width, height);
    if (img.width() == width && img.height() == height) return img;
    warn_non_square(img.width(), img.height(), log);
    return bilinear(img, width, height);
}

RealGrid resize(const RealGrid& img, int width, int height, ProcessLog* log) {
    check_target(width, height);
    if (img.width() == width && img.height() == height) return img;
    warn_non_square(img.width(), img.height(), log);
    return bilinear(img, width, height);
}

BinaryMask resize(const BinaryMask& m, int width, int height, ProcessLog* log) {
    check_target(width, height);
    if (m.width() == width && m.height() == height) return m;
    warn_non_square(m.width(), m.height(), log);
    return nearest(m, width, height);
}

LabelGrid resize_nearest(const LabelGrid& m, int width, int height) {
    if (m.width() == width && m.height() == height) return m;
    return nearest(m, width, height);
}

GrayImage resize_nearest(const GrayImage& m, int width, int height) {
    if (m.width() == width && m.height() == height) return m;
    return nearest(m, width, height);
}

}  // namespace slovasc
