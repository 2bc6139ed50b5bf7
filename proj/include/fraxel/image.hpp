#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace fraxel {

/// 8-bit grayscale raster, row-major.
class GrayImage {
public:
    GrayImage() = default;
    GrayImage(int width, int height, std::uint8_t fill = 0);
    GrayImage(int width, int height, std::vector<std::uint8_t> pixels);

    int width() const { return width_; }
    int height() const { return height_; }
    bool empty() const { return pixels_.empty(); }

    std::uint8_t at(int row, int col) const { return pixels_[index(row, col)]; }
    std::uint8_t& at(int row, int col) { return pixels_[index(row, col)]; }

    std::span<const std::uint8_t> pixels() const { return pixels_; }
    std::span<std::uint8_t> pixels() { return pixels_; }

    /// Copy of the rectangle [row, row + h) x [col, col + w).
    GrayImage crop(int row, int col, int w, int h) const;

    friend bool operator==(const GrayImage&, const GrayImage&) = default;

private:
    std::size_t index(int row, int col) const {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(col);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> pixels_;
};

struct SurfacePoint {
    int i;  // row, 1-based
    int j;  // column, 1-based
    int k;  // intensity
    friend bool operator==(const SurfacePoint&, const SurfacePoint&) = default;
};

/// Height-field point set {(i, j, I(i, j))}. One point per pixel, stored in
/// row-major pixel order; width and height are kept so the grid can be
/// rebuilt without a search.
struct SurfacePointSet {
    int width = 0;
    int height = 0;
    std::vector<SurfacePoint> points;

    std::size_t size() const { return points.size(); }
    int min_intensity() const;
    int max_intensity() const;
};

SurfacePointSet to_surface(const GrayImage& img);
GrayImage from_surface(const SurfacePointSet& surface);

/// ITU-R 601 luminance with round-half-up, in integer arithmetic.
std::uint8_t luminance(std::uint8_t r, std::uint8_t g, std::uint8_t b);

/// Reads PGM (P2/P5), PPM (P3/P6, converted to luminance) or 8-bit PNG.
GrayImage load_image(const std::filesystem::path& path);

/// Writes binary PGM (P5, maxval 255).
void save_pgm(const GrayImage& img, const std::filesystem::path& path);

/// Fractional Brownian surface by Fourier filtering of white noise with
/// power spectrum ~ |f|^-(2H+2), rescaled to span [0, 255].
GrayImage synth_fbm(int width, int height, double hurst, std::uint64_t seed);

enum class Face { superior, inferior };

std::string to_string(Face face);
Face parse_face(const std::string& text);

struct ManifestEntry {
    std::filesystem::path path;
    std::string label;
    std::string sample_id;
    Face face = Face::superior;
};

struct SampleManifest {
    std::vector<ManifestEntry> entries;
};

/// CSV with header `path,label,sample_id,face`. Relative image paths are
/// resolved against the manifest's directory.
SampleManifest read_manifest(const std::filesystem::path& path);
void write_manifest(const SampleManifest& manifest, const std::filesystem::path& path);

}  // namespace fraxel
