#pragma once

#include "fraxel/image.hpp"

#include <cstdint>
#include <vector>

namespace fraxel {

/// Rotates the image content counterclockwise by `degrees` about its
/// center (same canvas size), bilinear interpolation, background `fill`.
GrayImage rotate_image(const GrayImage& img, double degrees, std::uint8_t fill = 255);

struct AlignmentResult {
    GrayImage image;
    double angle = 0.0;  // degrees applied to the input to align it
};

/// Searches angles k * angle_step within [-45, 45] degrees for the rotation
/// whose vertical projection (column profile of mean intensity over the
/// inscribed disk) has maximum variance, and returns the input rotated by it.
/// Ties go to the smallest |angle|, so an aligned image comes back unchanged.
AlignmentResult radon_align(const GrayImage& img, double angle_step);

/// Variance of the vertical projection after rotating by `degrees`.
double projection_variance(const GrayImage& img, double degrees);

struct WindowOrigin {
    int row = 0;
    int col = 0;
    friend bool operator==(const WindowOrigin&, const WindowOrigin&) = default;
};

struct WindowSet {
    int size = 0;
    std::vector<GrayImage> windows;
    std::vector<WindowOrigin> origins;
};

/// Up to `count` pairwise-disjoint size x size windows at least `margin`
/// pixels from the border, chosen by seeded rejection sampling over a
/// size-aligned lattice. Gives up after 1000 * count consecutive rejections.
WindowSet extract_windows(const GrayImage& img, int size, int count, std::uint64_t seed,
                          int margin = 0);

}  // namespace fraxel
