#include "fraxel/baselines.hpp"

#include "fft.hpp"
#include "fraxel/error.hpp"

#include <cmath>
#include <numbers>

namespace fraxel {
namespace {

// Radial bandwidth of each Gabor filter relative to its center frequency.
constexpr double kBandwidthRatio = 0.35;

void require_square(const GrayImage& img) {
    if (img.empty() || img.width() != img.height())
        throw ParameterError("baseline descriptors need a square image");
}

// Signed integer frequency of DFT bin k for length n.
int signed_bin(int k, int n) { return k <= n / 2 ? k : k - n; }

}  // namespace

void BaselineConfig::validate() const {
    if (fourier_rings < 1) throw ParameterError("fourier rings must be >= 1");
    if (gabor_scales < 1 || gabor_orientations < 1)
        throw ParameterError("gabor scales and orientations must be >= 1");
    if (!(gabor_freq_low > 0.0 && gabor_freq_low < gabor_freq_high && gabor_freq_high <= 0.5))
        throw ParameterError("gabor frequency range must satisfy 0 < low < high <= 0.5");
}

std::vector<double> fourier_descriptors(const GrayImage& img, int rings) {
    require_square(img);
    if (rings < 1) throw ParameterError("fourier rings must be >= 1");
    const int n = img.width();
    std::vector<detail::Complex> data(img.pixels().size());
    double mean = 0.0;
    for (auto v : img.pixels()) mean += v;
    mean /= static_cast<double>(data.size());
    // removing the mean only touches the DC bin, which is excluded anyway
    for (std::size_t i = 0; i < data.size(); ++i) data[i] = img.pixels()[i] - mean;
    detail::fft2d(data, n, n, false);

    std::vector<double> ring(rings, 0.0);
    double total = 0.0;
    const double nyquist = n / 2.0;
    const double width = nyquist / rings;
    for (int ky = 0; ky < n; ++ky) {
        const int v = signed_bin(ky, n);
        for (int kx = 0; kx < n; ++kx) {
            const int u = signed_bin(kx, n);
            if (u == 0 && v == 0) continue;
            const double power = std::norm(data[static_cast<std::size_t>(ky) * n + kx]);
            total += power;
            const double radius = std::hypot(u, v);
            if (radius > nyquist) continue;
            const int r = std::min(rings - 1, static_cast<int>(radius / width));
            ring[r] += power;
        }
    }
    if (total <= 0.0) return std::vector<double>(rings, 0.0);
    for (auto& e : ring) e /= total;
    return ring;
}

double gabor_center_frequency(const BaselineConfig& cfg, int s) {
    if (cfg.gabor_scales == 1) return cfg.gabor_freq_low;
    const double t = static_cast<double>(s) / (cfg.gabor_scales - 1);
    return cfg.gabor_freq_low * std::pow(cfg.gabor_freq_high / cfg.gabor_freq_low, t);
}

double gabor_dc_gain(const BaselineConfig& cfg, int s) {
    const double f = gabor_center_frequency(cfg, s);
    const double sigma = kBandwidthRatio * f;
    return std::exp(-(f * f) / (2.0 * sigma * sigma));
}

std::vector<double> gabor_descriptors(const GrayImage& img, const BaselineConfig& cfg) {
    require_square(img);
    cfg.validate();
    const int n = img.width();
    const std::size_t count = img.pixels().size();
    std::vector<detail::Complex> spectrum(count);
    for (std::size_t i = 0; i < count; ++i) spectrum[i] = img.pixels()[i];
    detail::fft2d(spectrum, n, n, false);

    std::vector<double> features;
    features.reserve(2 * static_cast<std::size_t>(cfg.gabor_scales * cfg.gabor_orientations));
    std::vector<detail::Complex> response(count);
    std::vector<double> magnitude(count);
    for (int s = 0; s < cfg.gabor_scales; ++s) {
        const double f0 = gabor_center_frequency(cfg, s);
        const double sigma = kBandwidthRatio * f0;
        for (int o = 0; o < cfg.gabor_orientations; ++o) {
            const double theta = std::numbers::pi * o / cfg.gabor_orientations;
            const double c = std::cos(theta);
            const double sn = std::sin(theta);
            for (int ky = 0; ky < n; ++ky) {
                const double v = static_cast<double>(signed_bin(ky, n)) / n;
                for (int kx = 0; kx < n; ++kx) {
                    const double u = static_cast<double>(signed_bin(kx, n)) / n;
                    const double along = u * c + v * sn - f0;
                    const double across = -u * sn + v * c;
                    const double g = std::exp(-(along * along + across * across) / (2 * sigma * sigma));
                    const std::size_t i = static_cast<std::size_t>(ky) * n + kx;
                    response[i] = spectrum[i] * g;
                }
            }
            detail::fft2d(response, n, n, true);
            const double scale = 1.0 / static_cast<double>(count);
            double sum = 0.0;
            for (std::size_t i = 0; i < count; ++i) {
                magnitude[i] = std::abs(response[i]) * scale;
                sum += magnitude[i];
            }
            const double mean = sum / static_cast<double>(count);
            double ss = 0.0;
            for (double m : magnitude) ss += (m - mean) * (m - mean);
            const double var = ss / static_cast<double>(count);
            features.push_back(mean);
            features.push_back(std::sqrt(var));
        }
    }
    return features;
}

}  // namespace fraxel
