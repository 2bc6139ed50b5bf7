#pragma once

#include "fraxel/image.hpp"

#include <vector>

namespace fraxel {

struct BaselineConfig {
    int fourier_rings = 30;
    int gabor_scales = 4;
    int gabor_orientations = 6;
    double gabor_freq_low = 0.05;  // cycles / pixel
    double gabor_freq_high = 0.4;

    void validate() const;
};

/// Fraction of non-DC spectral power in each of `rings` equal-width annuli
/// spanning radii [0, N/2] (in cycles per image). Power beyond N/2 (the
/// spectrum corners) counts towards the total only, so the vector sums to
/// at most 1. Square images only.
std::vector<double> fourier_descriptors(const GrayImage& img, int rings);

/// Center frequency of Gabor scale `s` (geometric between low and high).
double gabor_center_frequency(const BaselineConfig& cfg, int s);

/// Gain of the Gabor filter at scale `s` for a constant input.
double gabor_dc_gain(const BaselineConfig& cfg, int s);

/// Mean and standard deviation of each filter's response magnitude,
/// ordered scale-major then orientation: length 2 * scales * orientations.
std::vector<double> gabor_descriptors(const GrayImage& img, const BaselineConfig& cfg);

}  // namespace fraxel
