#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "phantom.hpp"
#include "slovasc/errors.hpp"
#include "slovasc/stats.hpp"
#include "slovasc/vesselness.hpp"

using namespace slovasc;
using namespace slovasc::testing;

namespace {

GrayImage bar_image(int size, int width, std::uint8_t field, std::uint8_t bar) {
    GrayImage img(size, size, field);
    const int y0 = size / 2 - width / 2;
    for (int y = y0; y < y0 + width; ++y)
        for (int x = 0; x < size; ++x) img(x, y) = bar;
    return img;
}

double median(std::vector<double> v) {
    std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
    return v[v.size() / 2];
}

std::size_t argmax(const RealGrid& g) {
    return static_cast<std::size_t>(std::max_element(g.pixels().begin(), g.pixels().end()) - g.pixels().begin());
}

}  // namespace

TEST(Frangi, DarkBarStandsOut) {
    Rng rng(31);
    GrayImage img = bar_image(128, 5, 200, 80);
    for (auto& p : img.pixels()) p = static_cast<std::uint8_t>(std::clamp(p + 4.0 * rng.normal(), 0.0, 255.0));
    const RealGrid v = frangi_vesselness(img);
    std::vector<double> background;
    for (int y = 0; y < 128; ++y)
        for (int x = 0; x < 128; ++x)
            if (std::abs(y - 64) > 12) background.push_back(v(x, y));
    double midline = 0;
    for (int x = 20; x < 108; ++x) midline += v(x, 64);
    midline /= 88;
    EXPECT_GT(midline, 10.0 * std::max(median(background), 1e-6));
    for (double p : v.pixels()) {
        EXPECT_GE(p, 0.0);
        EXPECT_LE(p, 1.0);
    }
}

TEST(Frangi, ConstantImageIsZero) {
    ProcessLog log;
    const RealGrid v = frangi_vesselness(GrayImage(64, 64, 120), {}, &log);
    EXPECT_TRUE(std::all_of(v.pixels().begin(), v.pixels().end(), [](double p) { return p == 0.0; }));
    EXPECT_TRUE(log.contains(LogLevel::Warn, "FlatImage"));
    EXPECT_FALSE(segment_fallback(GrayImage(64, 64, 120)).any());
}

TEST(Frangi, BrightBarGated) {
    const RealGrid dark = frangi_vesselness(bar_image(128, 5, 200, 80));
    const RealGrid bright = frangi_vesselness(bar_image(128, 5, 80, 200));
    EXPECT_GT(dark(64, 64), 0.5);
    EXPECT_LT(bright(64, 64), 0.05);
}

TEST(Frangi, AffineIntensityInvariantArgmax) {
    const Phantom ph = make_phantom(PhantomKind::DiscCentred, 2, 256);
    GrayImage squeezed = ph.image;
    for (auto& p : squeezed.pixels()) p = static_cast<std::uint8_t>(40 + p / 2);
    const RealGrid a = frangi_vesselness(ph.image);
    const RealGrid b = frangi_vesselness(squeezed);
    // Halving the contrast leaves the strongest ridge where it was, up to 8-bit rounding.
    const std::size_t ia = argmax(a), ib = argmax(b);
    const int dx = int(ia % 256) - int(ib % 256), dy = int(ia / 256) - int(ib / 256);
    EXPECT_LE(std::hypot(dx, dy), 1.5);
}

TEST(Frangi, ScaleResponsePeaksNearHalfWidth) {
    for (int width : {4, 6, 8}) {
        const RealGrid img = [&] {
            RealGrid g(160, 160, 200.0);
            for (int y = 80 - width / 2; y < 80 - width / 2 + width; ++y)
                for (int x = 0; x < 160; ++x) g(x, y) = 80.0;
            return g;
        }();
        std::vector<double> response;
        const std::vector<double> sigmas = {1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 5.0, 6.0, 8.0};
        const double centre_y = 80 - width / 2 + (width - 1) / 2.0;
        for (double s : sigmas) {
            const Hessian h = hessian(img, s);
            // Average the two middle rows for even widths.
            const int y0 = int(std::floor(centre_y)), y1 = int(std::ceil(centre_y));
            response.push_back(0.5 * (h.yy(80, y0) + h.yy(80, y1)));
        }
        const auto peak = std::max_element(response.begin(), response.end()) - response.begin();
        EXPECT_NEAR(sigmas[peak], width / 2.0, 0.51) << width;
        for (long i = 0; i < peak; ++i) EXPECT_LT(response[i], response[i + 1]) << width;
        for (std::size_t i = peak; i + 1 < response.size(); ++i) EXPECT_GT(response[i], response[i + 1]) << width;
    }
}

TEST(Params, DefaultsScaleAndValidate) {
    const auto p768 = VesselnessParams::scaled_to(768, 768);
    EXPECT_EQ(p768.scales_px, (std::vector<double>{1.5, 2.5, 3.5, 5.0}));
    EXPECT_DOUBLE_EQ(p768.beta, 0.5);
    EXPECT_DOUBLE_EQ(p768.prob_threshold, 0.10);
    const auto p1536 = VesselnessParams::scaled_to(1536, 2000);
    EXPECT_EQ(p1536.scales_px, (std::vector<double>{3.0, 5.0, 7.0, 10.0}));
    VesselnessParams bad;
    bad.scales_px = {3.0, 1.0};
    EXPECT_THROW(bad.validate(), Error);
    bad.scales_px = {};
    EXPECT_THROW(bad.validate(), Error);
    VesselnessParams neg;
    neg.beta = -1;
    EXPECT_THROW(neg.validate(), Error);
    EXPECT_THROW(frangi_vesselness(GrayImage(16, 16, 3)), Error);
}

TEST(Fallback, PhantomDice) {
    for (auto kind : {PhantomKind::DiscCentred, PhantomKind::MaculaCentred}) {
        const Phantom ph = make_phantom(kind, 1);
        ProcessLog log;
        const BinaryMask seg = segment_fallback(ph.image, VesselnessParams::scaled_to(768, 768), &log);
        EXPECT_GE(dice(seg, ph.all_vessels()), 0.80);
        EXPECT_TRUE(log.contains(LogLevel::Info, "provenance=fallback"));
    }
}
