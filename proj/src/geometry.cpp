#include "slovasc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "slovasc/raster.hpp"

namespace slovasc {

namespace {

// Minimum disc component area at the 768 px reference resolution.
constexpr double kMinDiscArea = 500.0;

}  // namespace

std::string_view to_string(RoiName roi) noexcept {
    switch (roi) {
        case RoiName::WholeImage: return "whole";
        case RoiName::ZoneB: return "zone_b";
        case RoiName::ZoneC: return "zone_c";
    }
    return "whole";
}

DiscGeometry DiscGeometry::circle(double cx, double cy, double diameter) {
    return {cx, cy, diameter, diameter, diameter, 0.0, true};
}

std::optional<Ellipse> fit_ellipse(std::span<const PointF> points) {
    if (points.size() < 6) return std::nullopt;

    // Normalise for conditioning.
    double mx = 0.0, my = 0.0;
    for (const auto& p : points) {
        mx += p.x;
        my += p.y;
    }
    mx /= static_cast<double>(points.size());
    my /= static_cast<double>(points.size());
    double spread = 0.0;
    for (const auto& p : points) spread += (p.x - mx) * (p.x - mx) + (p.y - my) * (p.y - my);
    spread = std::sqrt(spread / (2.0 * static_cast<double>(points.size())));
    if (!(spread > 0.0)) return std::nullopt;

    Eigen::Matrix3d s1 = Eigen::Matrix3d::Zero();
    Eigen::Matrix3d s2 = Eigen::Matrix3d::Zero();
    Eigen::Matrix3d s3 = Eigen::Matrix3d::Zero();
    for (const auto& p : points) {
        const double x = (p.x - mx) / spread;
        const double y = (p.y - my) / spread;
        const Eigen::Vector3d d1(x * x, x * y, y * y);
        const Eigen::Vector3d d2(x, y, 1.0);
        s1 += d1 * d1.transpose();
        s2 += d1 * d2.transpose();
        s3 += d2 * d2.transpose();
    }
    Eigen::FullPivLU<Eigen::Matrix3d> lu(s3);
    if (!lu.isInvertible()) return std::nullopt;
    const Eigen::Matrix3d t = -lu.inverse() * s2.transpose();
    const Eigen::Matrix3d m = s1 + s2 * t;
    Eigen::Matrix3d reduced;
    reduced.row(0) = m.row(2) / 2.0;
    reduced.row(1) = -m.row(1);
    reduced.row(2) = m.row(0) / 2.0;

    Eigen::EigenSolver<Eigen::Matrix3d> eig(reduced);
    if (eig.info() != Eigen::Success) return std::nullopt;
    Eigen::Vector3d a1;
    bool found = false;
    double best = 0.0;
    for (int i = 0; i < 3; ++i) {
        const Eigen::Vector3d v = eig.eigenvectors().col(i).real();
        const double cond = 4.0 * v(0) * v(2) - v(1) * v(1);
        if (cond > 0.0 && (!found || cond > best)) {
            a1 = v;
            best = cond;
            found = true;
        }
    }
    if (!found) return std::nullopt;
    const Eigen::Vector3d a2 = t * a1;

    const double A = a1(0), B = a1(1), C = a1(2), D = a2(0), E = a2(1), F = a2(2);
    Eigen::Matrix2d q;
    q << A, B / 2.0, B / 2.0, C;
    if (q.determinant() <= 0.0) return std::nullopt;
    const Eigen::Vector2d centre = -q.inverse() * Eigen::Vector2d(D / 2.0, E / 2.0);
    const double f0 = F + (D * centre(0) + E * centre(1)) / 2.0;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> qe(q);
    const double r0 = -f0 / qe.eigenvalues()(0);
    const double r1 = -f0 / qe.eigenvalues()(1);
    if (!(r0 > 0.0) || !(r1 > 0.0)) return std::nullopt;
    const int major = r0 >= r1 ? 0 : 1;
    const Eigen::Vector2d axis = qe.eigenvectors().col(major);

    Ellipse e;
    e.cx = mx + spread * centre(0);
    e.cy = my + spread * centre(1);
    e.semi_major = spread * std::sqrt(std::max(r0, r1));
    e.semi_minor = spread * std::sqrt(std::min(r0, r1));
    e.angle_rad = std::atan2(axis(1), axis(0));
    return e;
}

std::optional<FoveaPoint> fovea_centroid(const BinaryMask& fovea_mask, ProcessLog* log) {
    double sx = 0.0, sy = 0.0;
    std::size_t n = 0;
    for (int y = 0; y < fovea_mask.height(); ++y) {
        for (int x = 0; x < fovea_mask.width(); ++x) {
            if (!fovea_mask.test(x, y)) continue;
            sx += x;
            sy += y;
            ++n;
        }
    }
    if (n == 0) {
        warn_to(log, "EmptyMask: fovea mask is empty; fovea reported absent");
        return std::nullopt;
    }
    if (label_components(fovea_mask).count() > 1) {
        warn_to(log, "fovea mask has multiple components; using the centroid of their union");
    }
    return FoveaPoint{sx / static_cast<double>(n), sy / static_cast<double>(n)};
}

DiscGeometry fit_disc_ellipse(const BinaryMask& disc_mask, ProcessLog* log) {
    DiscGeometry out;
    const BinaryMask disc = largest_component(disc_mask);
    const std::size_t area = disc.count();
    const double s = static_cast<double>(std::min(disc.width(), disc.height())) / kReferenceDim;
    if (area == 0) {
        warn_to(log, "optic disc mask is empty; zones skipped");
        return out;
    }
    if (static_cast<double>(area) < kMinDiscArea * s * s) {
        warn_to(log, "optic disc component too small (" + std::to_string(area) +
                         " px); zones skipped");
        return out;
    }

    std::vector<PointF> boundary;
    for (int y = 0; y < disc.height(); ++y) {
        for (int x = 0; x < disc.width(); ++x) {
            if (!disc.test(x, y)) continue;
            bool edge = false;
            for (const auto& [dx, dy] : kNeighbours8) {
                if (!disc.test_or(x + dx, y + dy)) {
                    edge = true;
                    break;
                }
            }
            if (edge) boundary.push_back({double(x), double(y)});
        }
    }
    const auto fit = fit_ellipse(boundary);
    if (!fit) {
        warn_to(log, "DegenerateFit: optic disc boundary is not elliptical; zones skipped");
        return out;
    }
    // Boundary pixel centres sit about half a pixel inside the disc edge.
    out.centre_x = fit->cx;
    out.centre_y = fit->cy;
    out.major_axis = 2.0 * fit->semi_major + 1.0;
    out.minor_axis = 2.0 * fit->semi_minor + 1.0;
    out.diameter = (out.major_axis + out.minor_axis) / 2.0;
    out.orientation_rad = fit->angle_rad;
    out.present = true;
    return out;
}

BinaryMask disc_interior(const DiscGeometry& disc, int width, int height) {
    BinaryMask out(width, height);
    if (!disc.present) return out;
    const double a = disc.major_axis / 2.0;
    const double b = disc.minor_axis / 2.0;
    const double r = disc.radius();
    const double c = std::cos(disc.orientation_rad);
    const double s = std::sin(disc.orientation_rad);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const double dx = x - disc.centre_x;
            const double dy = y - disc.centre_y;
            const double u = dx * c + dy * s;
            const double v = -dx * s + dy * c;
            const bool in_ellipse = a > 0 && b > 0 && (u * u) / (a * a) + (v * v) / (b * b) <= 1.0;
            if (in_ellipse || dx * dx + dy * dy < r * r) out.set(x, y);
        }
    }
    return out;
}

std::vector<RoiMask> build_zones(const DiscGeometry& disc, int width, int height) {
    std::vector<RoiMask> rois;
    rois.push_back({RoiName::WholeImage, BinaryMask(width, height, true)});
    if (!disc.present) return rois;

    const double r = disc.radius();
    const double d = disc.diameter;
    const double b_lo = r + 0.5 * d, b_hi = r + 1.0 * d;
    const double c_lo = r, c_hi = r + 2.0 * d;
    const BinaryMask interior = disc_interior(disc, width, height);
    BinaryMask zone_b(width, height);
    BinaryMask zone_c(width, height);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            if (interior.test(x, y)) continue;
            const double rho = std::hypot(x - disc.centre_x, y - disc.centre_y);
            if (rho >= b_lo && rho <= b_hi) zone_b.set(x, y);
            if (rho >= c_lo && rho <= c_hi) zone_c.set(x, y);
        }
    }
    rois.push_back({RoiName::ZoneB, std::move(zone_b)});
    rois.push_back({RoiName::ZoneC, std::move(zone_c)});
    return rois;
}

Laterality infer_laterality(const std::optional<FoveaPoint>& fovea, const DiscGeometry& disc,
                            ProcessLog* log) {
    if (!fovea || !disc.present) {
        warn_to(log, "laterality cannot be inferred without both fovea and optic disc");
        return Laterality::Unknown;
    }
    if (disc.centre_x == fovea->x) {
        warn_to(log, "fovea and disc share the same column; laterality unknown");
        return Laterality::Unknown;
    }
    return disc.centre_x > fovea->x ? Laterality::Right : Laterality::Left;
}

Location infer_location(const std::optional<FoveaPoint>& fovea, const DiscGeometry& disc,
                        std::pair<int, int> dims, ProcessLog* log) {
    const double cx = (dims.first - 1) / 2.0;
    const double cy = (dims.second - 1) / 2.0;
    if (fovea && disc.present) {
        const double df = std::hypot(fovea->x - cx, fovea->y - cy);
        const double dd = std::hypot(disc.centre_x - cx, disc.centre_y - cy);
        if (std::abs(df - dd) < 1e-9) {
            warn_to(log, "fovea and disc equidistant from the image centre; location unknown");
            return Location::Unknown;
        }
        return df < dd ? Location::MaculaCentred : Location::DiscCentred;
    }
    const double near = 0.25 * std::min(dims.first, dims.second);
    if (disc.present) {
        warn_to(log, "location inferred from the optic disc alone");
        const double dd = std::hypot(disc.centre_x - cx, disc.centre_y - cy);
        return dd <= near ? Location::DiscCentred : Location::MaculaCentred;
    }
    if (fovea) {
        warn_to(log, "location inferred from the fovea alone");
        const double df = std::hypot(fovea->x - cx, fovea->y - cy);
        return df <= near ? Location::MaculaCentred : Location::DiscCentred;
    }
    warn_to(log, "location cannot be inferred without fovea or optic disc");
    return Location::Unknown;
}

}  // namespace slovasc
