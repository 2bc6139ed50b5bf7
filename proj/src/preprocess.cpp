#include "fraxel/preprocess.hpp"

#include "fraxel/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace fraxel {
namespace {

double to_radians(double degrees) { return degrees * std::numbers::pi / 180.0; }

}  // namespace

GrayImage rotate_image(const GrayImage& img, double degrees, std::uint8_t fill) {
    const int w = img.width();
    const int h = img.height();
    const double cx = (w - 1) / 2.0;
    const double cy = (h - 1) / 2.0;
    const double c = std::cos(to_radians(degrees));
    const double s = std::sin(to_radians(degrees));

    GrayImage out(w, h, fill);
    for (int r = 0; r < h; ++r) {
        for (int col = 0; col < w; ++col) {
            // inverse of the forward map used by projection_variance
            const double dx = col - cx;
            const double dy = r - cy;
            const double sx = cx + dx * c - dy * s;
            const double sy = cy + dx * s + dy * c;
            const int x0 = static_cast<int>(std::floor(sx));
            const int y0 = static_cast<int>(std::floor(sy));
            const double fx = sx - x0;
            const double fy = sy - y0;
            auto sample = [&](int y, int x) -> double {
                if (x < 0 || y < 0 || x >= w || y >= h) return fill;
                return img.at(y, x);
            };
            // exactly on a pixel: no interpolation against the background
            if (std::abs(fx) < 1e-9 && std::abs(fy) < 1e-9) {
                out.at(r, col) = static_cast<std::uint8_t>(sample(y0, x0));
                continue;
            }
            const double v = (1 - fy) * ((1 - fx) * sample(y0, x0) + fx * sample(y0, x0 + 1)) +
                             fy * ((1 - fx) * sample(y0 + 1, x0) + fx * sample(y0 + 1, x0 + 1));
            out.at(r, col) = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
        }
    }
    return out;
}

double projection_variance(const GrayImage& img, double degrees) {
    const int w = img.width();
    const int h = img.height();
    const double cx = (w - 1) / 2.0;
    const double cy = (h - 1) / 2.0;
    const double radius = std::min(w, h) / 2.0;
    const double c = std::cos(to_radians(degrees));
    const double s = std::sin(to_radians(degrees));

    // Column bins of the rotated frame; pixels split linearly between the
    // two nearest bins. Only the inscribed disk contributes, so the profile
    // never sees rotated-in background.
    const int bins = w + 2;
    std::vector<double> sum(bins, 0.0);
    std::vector<double> weight(bins, 0.0);
    for (int r = 0; r < h; ++r) {
        const double dy = r - cy;
        for (int col = 0; col < w; ++col) {
            const double dx = col - cx;
            if (dx * dx + dy * dy > radius * radius) continue;
            const double xr = cx + dx * c + dy * s + 1.0;  // shift so bin 0 is valid
            const int b = static_cast<int>(std::floor(xr));
            const double frac = xr - b;
            const double v = img.at(r, col);
            if (b >= 0 && b < bins) {
                sum[b] += (1 - frac) * v;
                weight[b] += 1 - frac;
            }
            if (b + 1 >= 0 && b + 1 < bins && frac > 0) {
                sum[b + 1] += frac * v;
                weight[b + 1] += frac;
            }
        }
    }
    double total_w = 0.0;
    double total = 0.0;
    for (int b = 0; b < bins; ++b) {
        total_w += weight[b];
        total += sum[b];
    }
    if (total_w == 0.0) return 0.0;
    const double mean = total / total_w;
    double var = 0.0;
    for (int b = 0; b < bins; ++b) {
        if (weight[b] <= 0.0) continue;
        const double m = sum[b] / weight[b];
        var += weight[b] * (m - mean) * (m - mean);
    }
    return var / total_w;
}

AlignmentResult radon_align(const GrayImage& img, double angle_step) {
    if (!(angle_step > 0.0 && angle_step <= 5.0))
        throw ParameterError("angle step must lie in (0, 5] degrees");
    auto [lo, hi] = std::minmax_element(img.pixels().begin(), img.pixels().end());
    if (*lo == *hi) throw DegenerateInputError("constant image has no dominant axis");

    const int steps = static_cast<int>(std::floor(45.0 / angle_step + 1e-9));
    double best_angle = 0.0;
    double best = projection_variance(img, 0.0);
    // visit 0, +step, -step, +2step, ... so ties keep the smallest |angle|
    for (int k = 1; k <= steps; ++k) {
        for (int sign : {1, -1}) {
            const double a = sign * k * angle_step;
            const double v = projection_variance(img, a);
            if (v > best * (1.0 + 1e-12)) {
                best = v;
                best_angle = a;
            }
        }
    }
    if (best_angle == 0.0) return {img, 0.0};
    return {rotate_image(img, best_angle, 255), best_angle};
}

WindowSet extract_windows(const GrayImage& img, int size, int count, std::uint64_t seed,
                          int margin) {
    if (size <= 0) throw ParameterError("window size must be positive");
    if (count < 1) throw ParameterError("window count must be >= 1");
    if (margin < 0) throw ParameterError("margin must be non-negative");
    const int avail_h = img.height() - 2 * margin;
    const int avail_w = img.width() - 2 * margin;
    if (avail_h < size || avail_w < size)
        throw ParameterError("image " + std::to_string(img.width()) + "x" +
                             std::to_string(img.height()) + " too small for " +
                             std::to_string(size) + "px windows with margin " +
                             std::to_string(margin));

    std::mt19937_64 rng(seed);
    const int cells_y = avail_h / size;
    const int cells_x = avail_w / size;
    const int off_y = std::uniform_int_distribution<int>(0, avail_h - cells_y * size)(rng);
    const int off_x = std::uniform_int_distribution<int>(0, avail_w - cells_x * size)(rng);
    std::uniform_int_distribution<int> pick_y(0, cells_y - 1);
    std::uniform_int_distribution<int> pick_x(0, cells_x - 1);

    std::vector<char> taken(static_cast<std::size_t>(cells_y) * cells_x, 0);
    WindowSet out;
    out.size = size;
    const long long max_rejections = 1000LL * count;
    long long rejections = 0;
    while (static_cast<int>(out.origins.size()) < count && rejections < max_rejections) {
        const int cy = pick_y(rng);
        const int cx = pick_x(rng);
        auto& t = taken[static_cast<std::size_t>(cy) * cells_x + cx];
        if (t) {
            ++rejections;
            continue;
        }
        t = 1;
        rejections = 0;
        WindowOrigin o{margin + off_y + cy * size, margin + off_x + cx * size};
        out.windows.push_back(img.crop(o.row, o.col, size, size));
        out.origins.push_back(o);
    }
    return out;
}

}  // namespace fraxel
