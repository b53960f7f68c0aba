#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "phantom.hpp"
#include "slovasc/geometry.hpp"

using namespace slovasc;
using namespace slovasc::testing;

namespace {

constexpr double kPi = std::numbers::pi;

std::size_t count_in(const BinaryMask& m) { return m.count(); }

const RoiMask* find_roi(const std::vector<RoiMask>& rois, RoiName name) {
    for (const auto& r : rois)
        if (r.name == name) return &r;
    return nullptr;
}

}  // namespace

TEST(Fovea, CentroidOfDisc) {
    const auto f = fovea_centroid(filled_circle(200, 200, 120, 80, 10));
    ASSERT_TRUE(f);
    EXPECT_NEAR(f->x, 120, 1e-9);
    EXPECT_NEAR(f->y, 80, 1e-9);
}

TEST(Fovea, EmptyMaskWarns) {
    ProcessLog log;
    EXPECT_FALSE(fovea_centroid(BinaryMask(50, 50), &log));
    EXPECT_EQ(log.count(LogLevel::Warn), 1u);
}

TEST(Fovea, TwoComponentsUseUnionAndWarn) {
    ProcessLog log;
    const BinaryMask m = mask_or(filled_circle(200, 200, 50, 50, 5), filled_circle(200, 200, 150, 50, 5));
    const auto f = fovea_centroid(m, &log);
    ASSERT_TRUE(f);
    EXPECT_NEAR(f->x, 100, 1e-9);
    EXPECT_NEAR(f->y, 50, 1e-9);
    EXPECT_GE(log.count(LogLevel::Warn), 1u);
}

TEST(EllipseFit, ExactPointsRecovered) {
    std::vector<PointF> pts;
    const double a = 30, b = 12, theta = 0.6;
    for (int i = 0; i < 50; ++i) {
        const double t = 2 * kPi * i / 50;
        const double x = a * std::cos(t), y = b * std::sin(t);
        pts.push_back({10 + x * std::cos(theta) - y * std::sin(theta),
                       -4 + x * std::sin(theta) + y * std::cos(theta)});
    }
    const auto e = fit_ellipse(pts);
    ASSERT_TRUE(e);
    EXPECT_NEAR(e->cx, 10, 1e-6);
    EXPECT_NEAR(e->cy, -4, 1e-6);
    EXPECT_NEAR(e->semi_major, a, 1e-6);
    EXPECT_NEAR(e->semi_minor, b, 1e-6);
    EXPECT_NEAR(std::remainder(e->angle_rad - theta, kPi), 0.0, 1e-6);
}

TEST(EllipseFit, CollinearRejected) {
    std::vector<PointF> pts;
    for (int i = 0; i < 20; ++i) pts.push_back({double(i), 2.0 * i});
    EXPECT_FALSE(fit_ellipse(pts));
}

TEST(DiscFit, CircleMask) {
    const DiscGeometry d = fit_disc_ellipse(filled_circle(400, 400, 200, 180, 40));
    ASSERT_TRUE(d.present);
    EXPECT_NEAR(d.centre_x, 200, 0.5);
    EXPECT_NEAR(d.centre_y, 180, 0.5);
    EXPECT_NEAR(d.diameter, 80, 1.0);
    EXPECT_NEAR(d.major_axis / d.minor_axis, 1.0, 0.03);
}

TEST(DiscFit, EllipseMask) {
    const DiscGeometry d = fit_disc_ellipse(filled_ellipse(400, 400, 200, 200, 60, 40));
    ASSERT_TRUE(d.present);
    EXPECT_NEAR(d.major_axis, 120, 1.0);
    EXPECT_NEAR(d.minor_axis, 80, 1.0);
    EXPECT_NEAR(d.diameter, 100, 1.0);
    EXPECT_NEAR(std::sin(d.orientation_rad), 0.0, 0.02);
}

TEST(DiscFit, RotationEquivariance) {
    const BinaryMask m = filled_ellipse(300, 300, 120, 140, 50, 30, 0.4);
    const DiscGeometry d = fit_disc_ellipse(m);
    const DiscGeometry r = fit_disc_ellipse(rotate90(m));
    ASSERT_TRUE(d.present && r.present);
    // Clockwise rotation of a 300 px raster maps (x, y) to (299 - y, x).
    EXPECT_NEAR(r.centre_x, 299 - d.centre_y, 1e-6);
    EXPECT_NEAR(r.centre_y, d.centre_x, 1e-6);
    EXPECT_NEAR(r.diameter, d.diameter, 1e-6);
    EXPECT_NEAR(std::remainder(r.orientation_rad - (d.orientation_rad + kPi / 2), kPi), 0.0, 1e-6);
}

TEST(DiscFit, EmptyOrTinyAbsentWithWarning) {
    ProcessLog log;
    EXPECT_FALSE(fit_disc_ellipse(BinaryMask(768, 768), &log).present);
    EXPECT_FALSE(fit_disc_ellipse(filled_circle(768, 768, 300, 300, 5), &log).present);
    EXPECT_EQ(log.count(LogLevel::Warn), 2u);
}

TEST(DiscFit, LargestComponentUsed) {
    const BinaryMask m = mask_or(filled_circle(768, 768, 300, 300, 40), filled_circle(768, 768, 600, 600, 15));
    const DiscGeometry d = fit_disc_ellipse(m);
    ASSERT_TRUE(d.present);
    EXPECT_NEAR(d.centre_x, 300, 0.5);
}

TEST(Zones, AreasMatchAnnuli) {
    const DiscGeometry disc = DiscGeometry::circle(384, 384, 90);
    const auto rois = build_zones(disc, 768, 768);
    ASSERT_EQ(rois.size(), 3u);
    const RoiMask* b = find_roi(rois, RoiName::ZoneB);
    const RoiMask* c = find_roi(rois, RoiName::ZoneC);
    ASSERT_TRUE(b && c);
    const double r = 45, D = 90;
    const double area_b = kPi * ((r + D) * (r + D) - (r + 0.5 * D) * (r + 0.5 * D));
    const double area_c = kPi * ((r + 2 * D) * (r + 2 * D) - r * r);
    EXPECT_NEAR(count_in(b->mask) / area_b, 1.0, 0.02);
    EXPECT_NEAR(count_in(c->mask) / area_c, 1.0, 0.02);
    EXPECT_TRUE(is_subset(b->mask, c->mask));
    EXPECT_FALSE(mask_and(c->mask, disc_interior(disc, 768, 768)).any());
    EXPECT_EQ(find_roi(rois, RoiName::WholeImage)->mask.count(), 768u * 768u);
}

TEST(Zones, EllipticDiscInteriorExcluded) {
    DiscGeometry disc;
    disc.centre_x = 300;
    disc.centre_y = 300;
    disc.major_axis = 120;
    disc.minor_axis = 80;
    disc.diameter = 100;
    disc.orientation_rad = 0.0;
    disc.present = true;
    const BinaryMask interior = disc_interior(disc, 768, 768);
    EXPECT_TRUE(interior.test(359, 300));
    EXPECT_TRUE(interior.test(300, 349));
    for (const auto& roi : build_zones(disc, 768, 768)) {
        if (roi.name == RoiName::WholeImage) continue;
        EXPECT_FALSE(mask_and(roi.mask, interior).any());
    }
}

TEST(Zones, ClippedAtBorder) {
    const DiscGeometry disc = DiscGeometry::circle(40, 384, 90);
    const auto rois = build_zones(disc, 768, 768);
    const RoiMask* c = find_roi(rois, RoiName::ZoneC);
    ASSERT_TRUE(c);
    const double full = kPi * (225.0 * 225.0 - 45.0 * 45.0);
    EXPECT_LT(c->mask.count(), full * 0.8);
    EXPECT_GT(c->mask.count(), 0u);
}

TEST(Zones, AbsentDiscGivesWholeImageOnly) {
    const auto rois = build_zones(DiscGeometry{}, 400, 300);
    ASSERT_EQ(rois.size(), 1u);
    EXPECT_EQ(rois[0].name, RoiName::WholeImage);
}

TEST(Laterality, DiscSideDecides) {
    const DiscGeometry disc = DiscGeometry::circle(500, 384, 90);
    EXPECT_EQ(infer_laterality(FoveaPoint{270, 384}, disc), Laterality::Right);
    const DiscGeometry left = DiscGeometry::circle(200, 384, 90);
    EXPECT_EQ(infer_laterality(FoveaPoint{430, 384}, left), Laterality::Left);
    EXPECT_EQ(infer_laterality(std::nullopt, disc), Laterality::Unknown);
    EXPECT_EQ(infer_laterality(FoveaPoint{270, 384}, DiscGeometry{}), Laterality::Unknown);
    ProcessLog log;
    EXPECT_EQ(infer_laterality(FoveaPoint{500, 100}, disc, &log), Laterality::Unknown);
    EXPECT_EQ(log.count(LogLevel::Warn), 1u);
}

TEST(Laterality, MirrorFlips) {
    const Phantom ph = make_phantom(PhantomKind::DiscCentred, 5);
    const auto f = fovea_centroid(ph.fovea);
    const auto d = fit_disc_ellipse(ph.disc);
    const auto fm = fovea_centroid(mirror_x(ph.fovea));
    const auto dm = fit_disc_ellipse(mirror_x(ph.disc));
    const Laterality a = infer_laterality(f, d);
    const Laterality b = infer_laterality(fm, dm);
    EXPECT_NE(a, Laterality::Unknown);
    EXPECT_NE(b, Laterality::Unknown);
    EXPECT_NE(a, b);
}

TEST(Location, NearerLandmarkDecides) {
    EXPECT_EQ(infer_location(FoveaPoint{384, 384}, DiscGeometry::circle(600, 384, 90), {768, 768}),
              Location::MaculaCentred);
    EXPECT_EQ(infer_location(FoveaPoint{150, 384}, DiscGeometry::circle(390, 384, 90), {768, 768}),
              Location::DiscCentred);
    EXPECT_EQ(infer_location(FoveaPoint{283.5, 383.5}, DiscGeometry::circle(483.5, 383.5, 90), {768, 768}),
              Location::Unknown);
}

TEST(Location, SingleLandmark) {
    ProcessLog log;
    EXPECT_EQ(infer_location(FoveaPoint{390, 380}, DiscGeometry{}, {768, 768}, &log), Location::MaculaCentred);
    EXPECT_EQ(infer_location(FoveaPoint{100, 380}, DiscGeometry{}, {768, 768}, &log), Location::DiscCentred);
    EXPECT_EQ(infer_location(std::nullopt, DiscGeometry::circle(380, 390, 80), {768, 768}, &log),
              Location::DiscCentred);
    EXPECT_EQ(infer_location(std::nullopt, DiscGeometry{}, {768, 768}, &log), Location::Unknown);
    EXPECT_GE(log.count(LogLevel::Warn), 3u);
}

TEST(Location, PhantomsClassified) {
    for (std::uint32_t seed : {1u, 2u}) {
        for (auto kind : {PhantomKind::DiscCentred, PhantomKind::MaculaCentred}) {
            const Phantom ph = make_phantom(kind, seed);
            const Location loc = infer_location(fovea_centroid(ph.fovea), fit_disc_ellipse(ph.disc), {768, 768});
            EXPECT_EQ(loc, kind == PhantomKind::DiscCentred ? Location::DiscCentred : Location::MaculaCentred);
        }
    }
}
