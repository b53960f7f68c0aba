#pragma once

#include <vector>

#include "slovasc/grid.hpp"
#include "slovasc/process_log.hpp"

namespace slovasc {

enum class Polarity { DarkOnBright };

struct VesselnessParams {
    std::vector<double> scales_px = {1.5, 2.5, 3.5, 5.0};
    double beta = 0.5;
    double c = 0.0;  ///< 0 selects half the maximum Hessian Frobenius norm at each scale
    Polarity polarity = Polarity::DarkOnBright;
    double prob_threshold = 0.10;

    /// Scales grow linearly with min(width, height) / 768.
    static VesselnessParams scaled_to(int width, int height);
    /// Throws InvalidArgument when a field is out of range.
    void validate() const;
};

/// Scale-normalised Gaussian second derivatives at one scale, reflect borders.
struct Hessian {
    RealGrid xx, xy, yy;
};
Hessian hessian(const RealGrid& img, double sigma);

/// Multi-scale Frangi ridge response, normalised to [0, 1] by its maximum.
RealGrid frangi_vesselness(const GrayImage& img, const VesselnessParams& p = {},
                           ProcessLog* log = nullptr);

/// Threshold of the vesselness map, then small-component removal and gap
/// bridging with resolution-scaled defaults.
BinaryMask segment_fallback(const GrayImage& img, const VesselnessParams& p = {},
                            ProcessLog* log = nullptr);

}  // namespace slovasc
