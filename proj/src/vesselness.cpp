#include "slovasc/vesselness.hpp"

#include <algorithm>
#include <cmath>

#include "slovasc/errors.hpp"
#include "slovasc/ingestion.hpp"
#include "slovasc/raster.hpp"

namespace slovasc {

namespace {

// scipy-style "reflect": d c b a | a b c d | d c b a
int reflect(int i, int n) {
    if (n == 1) return 0;
    const int period = 2 * n;
    i %= period;
    if (i < 0) i += period;
    return i < n ? i : period - 1 - i;
}

enum class Order { Zero, First, Second };

std::vector<double> gaussian_kernel(double sigma, Order order) {
    const int radius = std::max(1, static_cast<int>(std::ceil(4.0 * sigma)));
    std::vector<double> g(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        g[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
        sum += g[i + radius];
    }
    for (auto& v : g) v /= sum;
    if (order == Order::Zero) return g;
    std::vector<double> k(g.size());
    const double s2 = sigma * sigma;
    for (int i = -radius; i <= radius; ++i) {
        const double x = i;
        k[i + radius] = order == Order::First ? -x / s2 * g[i + radius]
                                              : (x * x - s2) / (s2 * s2) * g[i + radius];
    }
    if (order == Order::Second) {
        // Zero response to constants.
        double mean = 0.0;
        for (double v : k) mean += v;
        mean /= static_cast<double>(k.size());
        for (auto& v : k) v -= mean;
    }
    return k;
}

RealGrid convolve_x(const RealGrid& in, const std::vector<double>& k) {
    const int r = static_cast<int>(k.size() / 2);
    RealGrid out(in.width(), in.height());
    for (int y = 0; y < in.height(); ++y) {
        for (int x = 0; x < in.width(); ++x) {
            double acc = 0.0;
            for (int i = -r; i <= r; ++i) acc += k[i + r] * in(reflect(x - i, in.width()), y);
            out(x, y) = acc;
        }
    }
    return out;
}

RealGrid convolve_y(const RealGrid& in, const std::vector<double>& k) {
    const int r = static_cast<int>(k.size() / 2);
    RealGrid out(in.width(), in.height());
    for (int y = 0; y < in.height(); ++y) {
        for (int x = 0; x < in.width(); ++x) {
            double acc = 0.0;
            for (int i = -r; i <= r; ++i) acc += k[i + r] * in(x, reflect(y - i, in.height()));
            out(x, y) = acc;
        }
    }
    return out;
}

}  // namespace

VesselnessParams VesselnessParams::scaled_to(int width, int height) {
    VesselnessParams p;
    const double s = static_cast<double>(std::min(width, height)) / kReferenceDim;
    for (auto& v : p.scales_px) v *= s;
    return p;
}

void VesselnessParams::validate() const {
    if (scales_px.empty()) throw Error(ErrorCode::InvalidArgument, "vesselness needs at least one scale");
    for (std::size_t i = 0; i < scales_px.size(); ++i) {
        if (!(scales_px[i] > 0.0)) throw Error(ErrorCode::InvalidArgument, "vesselness scales must be positive");
        if (i > 0 && scales_px[i] < scales_px[i - 1]) {
            throw Error(ErrorCode::InvalidArgument, "vesselness scales must be ascending");
        }
    }
    if (!(beta > 0.0)) throw Error(ErrorCode::InvalidArgument, "vesselness beta must be positive");
    if (c < 0.0) throw Error(ErrorCode::InvalidArgument, "vesselness c must be non-negative");
    if (!(prob_threshold >= 0.0 && prob_threshold <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "vesselness threshold must lie in [0, 1]");
    }
}

Hessian hessian(const RealGrid& img, double sigma) {
    const auto g0 = gaussian_kernel(sigma, Order::Zero);
    const auto g1 = gaussian_kernel(sigma, Order::First);
    const auto g2 = gaussian_kernel(sigma, Order::Second);
    const RealGrid gx = convolve_x(img, g0);  // smoothed along x
    const RealGrid dx = convolve_x(img, g1);
    const RealGrid dxx = convolve_x(img, g2);
    Hessian h{convolve_y(dxx, g0), convolve_y(dx, g1), convolve_y(gx, g2)};
    const double norm = sigma * sigma;
    for (auto* grid : {&h.xx, &h.xy, &h.yy})
        for (auto& v : grid->pixels()) v *= norm;
    return h;
}

RealGrid frangi_vesselness(const GrayImage& img, const VesselnessParams& p, ProcessLog* log) {
    p.validate();
    if (img.width() < kMinImageDim || img.height() < kMinImageDim) {
        throw Error(ErrorCode::ImageTooSmall, "vesselness needs at least 32x32 pixels");
    }
    RealGrid out(img.width(), img.height(), 0.0);
    const auto [lo, hi] = std::minmax_element(img.pixels().begin(), img.pixels().end());
    if (*lo == *hi) {
        warn_to(log, "FlatImage: zero dynamic range; vesselness is all zero");
        return out;
    }
    const RealGrid real = to_real(img);
    const double two_beta2 = 2.0 * p.beta * p.beta;

    for (double sigma : p.scales_px) {
        const Hessian h = hessian(real, sigma);
        double c = p.c;
        if (c <= 0.0) {
            double max_norm = 0.0;
            for (std::size_t i = 0; i < h.xx.size(); ++i) {
                const double a = h.xx.pixels()[i], b = h.xy.pixels()[i], d = h.yy.pixels()[i];
                max_norm = std::max(max_norm, std::sqrt(a * a + 2 * b * b + d * d));
            }
            c = 0.5 * max_norm;
        }
        if (c <= 0.0) continue;
        const double two_c2 = 2.0 * c * c;
        for (std::size_t i = 0; i < h.xx.size(); ++i) {
            const double a = h.xx.pixels()[i], b = h.xy.pixels()[i], d = h.yy.pixels()[i];
            const double root = std::sqrt((a - d) * (a - d) + 4.0 * b * b);
            double l1 = 0.5 * (a + d + root);
            double l2 = 0.5 * (a + d - root);
            if (std::abs(l1) > std::abs(l2)) std::swap(l1, l2);
            if (!(l2 > 0.0)) continue;  // dark ridges have positive curvature across
            const double rb = l1 / l2;
            const double s2 = l1 * l1 + l2 * l2;
            const double v = std::exp(-rb * rb / two_beta2) * (1.0 - std::exp(-s2 / two_c2));
            auto& o = out.pixels()[i];
            o = std::max(o, v);
        }
    }
    const double peak = *std::max_element(out.pixels().begin(), out.pixels().end());
    if (peak > 0.0)
        for (auto& v : out.pixels()) v /= peak;
    return out;
}

BinaryMask segment_fallback(const GrayImage& img, const VesselnessParams& p, ProcessLog* log) {
    const RealGrid v = frangi_vesselness(img, p, log);
    const BinaryMask raw = threshold(v, p.prob_threshold);
    const BinaryMask out = post_process(raw, PostProcessParams::scaled_to(img.width(), img.height()));
    info_to(log, "provenance=fallback: vessel map from classical vesselness filter");
    return out;
}

}  // namespace slovasc
