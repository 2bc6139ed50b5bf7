#include "fraxel/image.hpp"

#include "csv.hpp"
#include "fft.hpp"
#include "fraxel/error.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>

namespace fraxel {

GrayImage::GrayImage(int width, int height, std::uint8_t fill)
    : width_(width), height_(height) {
    if (width <= 0 || height <= 0) throw ParameterError("image dimensions must be positive");
    pixels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

GrayImage::GrayImage(int width, int height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    if (width <= 0 || height <= 0) throw ParameterError("image dimensions must be positive");
    if (pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
        throw ParameterError("pixel count does not match width x height");
}

GrayImage GrayImage::crop(int row, int col, int w, int h) const {
    if (row < 0 || col < 0 || w <= 0 || h <= 0 || row + h > height_ || col + w > width_)
        throw ParameterError("crop rectangle outside image");
    GrayImage out(w, h);
    for (int r = 0; r < h; ++r) {
        auto src = pixels_.begin() + static_cast<std::ptrdiff_t>(index(row + r, col));
        std::copy(src, src + w, out.pixels_.begin() + static_cast<std::ptrdiff_t>(r) * w);
    }
    return out;
}

int SurfacePointSet::min_intensity() const {
    int m = 255;
    for (const auto& p : points) m = std::min(m, p.k);
    return m;
}

int SurfacePointSet::max_intensity() const {
    int m = 0;
    for (const auto& p : points) m = std::max(m, p.k);
    return m;
}

SurfacePointSet to_surface(const GrayImage& img) {
    SurfacePointSet s;
    s.width = img.width();
    s.height = img.height();
    s.points.reserve(img.pixels().size());
    for (int r = 0; r < img.height(); ++r)
        for (int c = 0; c < img.width(); ++c) s.points.push_back({r + 1, c + 1, img.at(r, c)});
    return s;
}

GrayImage from_surface(const SurfacePointSet& surface) {
    GrayImage img(surface.width, surface.height);
    for (const auto& p : surface.points) img.at(p.i - 1, p.j - 1) = static_cast<std::uint8_t>(p.k);
    return img;
}

std::uint8_t luminance(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    int weighted = 299 * r + 587 * g + 114 * b;  // thousandths
    return static_cast<std::uint8_t>((weighted + 500) / 1000);
}

namespace {

// Reads the next whitespace-separated header token, skipping '#' comments.
std::string next_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {}
            if (!tok.empty()) break;
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) break;
            continue;
        }
        tok += static_cast<char>(c);
    }
    return tok;
}

int header_int(std::istream& in, const std::filesystem::path& path) {
    std::string tok = next_token(in);
    try {
        std::size_t used = 0;
        int v = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw FormatError("malformed netpbm header in " + path.string());
    }
}

GrayImage load_netpbm(std::ifstream& in, const std::filesystem::path& path) {
    std::string magic = next_token(in);
    bool ascii = magic == "P2" || magic == "P3";
    bool color = magic == "P3" || magic == "P6";
    if (magic != "P2" && magic != "P5" && !color)
        throw FormatError("unsupported netpbm variant '" + magic + "' in " + path.string());
    int w = header_int(in, path);
    int h = header_int(in, path);
    int maxval = header_int(in, path);
    if (w <= 0 || h <= 0) throw FormatError("bad image dimensions in " + path.string());
    if (maxval <= 0 || maxval > 255)
        throw FormatError("unsupported bit depth (maxval " + std::to_string(maxval) + ") in " +
                          path.string());

    const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    const std::size_t channels = color ? 3 : 1;
    std::vector<std::uint8_t> raw(n * channels);
    if (ascii) {
        for (auto& v : raw) {
            int x = header_int(in, path);
            if (x < 0 || x > maxval) throw FormatError("sample out of range in " + path.string());
            v = static_cast<std::uint8_t>(x);
        }
    } else {
        // header_int consumed exactly one whitespace byte after maxval
        in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
        if (static_cast<std::size_t>(in.gcount()) != raw.size())
            throw FormatError("truncated pixel data in " + path.string());
    }
    if (!color) return GrayImage(w, h, std::move(raw));
    std::vector<std::uint8_t> gray(n);
    for (std::size_t i = 0; i < n; ++i) gray[i] = luminance(raw[3 * i], raw[3 * i + 1], raw[3 * i + 2]);
    return GrayImage(w, h, std::move(gray));
}

GrayImage load_png(const std::filesystem::path& path) {
    png_image image{};
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, path.c_str()))
        throw FormatError("cannot decode PNG " + path.string() + ": " + image.message);
    if (image.format & PNG_FORMAT_FLAG_LINEAR) {
        png_image_free(&image);
        throw FormatError("unsupported bit depth (16-bit PNG) in " + path.string());
    }
    const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
    image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    std::vector<std::uint8_t> buf(PNG_IMAGE_SIZE(image), 0);
    if (!png_image_finish_read(&image, nullptr, buf.data(), 0, nullptr)) {
        std::string msg = image.message;
        png_image_free(&image);
        throw FormatError("cannot decode PNG " + path.string() + ": " + msg);
    }
    const int w = static_cast<int>(image.width);
    const int h = static_cast<int>(image.height);
    if (!color) return GrayImage(w, h, std::move(buf));
    const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
    std::vector<std::uint8_t> gray(n);
    for (std::size_t i = 0; i < n; ++i) gray[i] = luminance(buf[3 * i], buf[3 * i + 1], buf[3 * i + 2]);
    return GrayImage(w, h, std::move(gray));
}

}  // namespace

GrayImage load_image(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    char sig[8] = {};
    in.read(sig, 8);
    if (in.gcount() >= 2 && sig[0] == 'P' && sig[1] >= '1' && sig[1] <= '9') {
        in.clear();
        in.seekg(0);
        return load_netpbm(in, path);
    }
    static constexpr unsigned char png_sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    if (in.gcount() == 8 && std::equal(png_sig, png_sig + 8, reinterpret_cast<unsigned char*>(sig))) {
        in.close();
        return load_png(path);
    }
    throw FormatError("unrecognized image format: " + path.string());
}

void save_pgm(const GrayImage& img, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
    auto px = img.pixels();
    out.write(reinterpret_cast<const char*>(px.data()), static_cast<std::streamsize>(px.size()));
    if (!out) throw IoError("write failed: " + path.string());
}

GrayImage synth_fbm(int width, int height, double hurst, std::uint64_t seed) {
    if (!(hurst > 0.0 && hurst < 1.0)) throw ParameterError("hurst exponent must lie in (0, 1)");
    if (width < 16 || height < 16) throw ParameterError("fBm surfaces need width, height >= 16");

    // amplitude ~ |f|^(-beta/2) with beta = 2H + 2
    const double exponent = -(hurst + 1.0);
    const int half_w = width / 2 + 1;
    std::vector<detail::Complex> spectrum(static_cast<std::size_t>(height) * half_w);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int ky = 0; ky < height; ++ky) {
        const double fy = static_cast<double>(ky <= height / 2 ? ky : ky - height) / height;
        for (int kx = 0; kx < half_w; ++kx) {
            const double fx = static_cast<double>(kx) / width;
            const double re = gauss(rng);
            const double im = gauss(rng);
            const double f = std::hypot(fx, fy);
            if (f == 0.0) continue;
            const double amp = std::pow(f, exponent);
            spectrum[static_cast<std::size_t>(ky) * half_w + kx] = {amp * re, amp * im};
        }
    }
    std::vector<double> field = detail::irfft2d(std::move(spectrum), width, height);

    auto [lo, hi] = std::minmax_element(field.begin(), field.end());
    const double min = *lo;
    const double span = *hi - *lo;
    std::vector<std::uint8_t> px(field.size());
    for (std::size_t i = 0; i < field.size(); ++i)
        px[i] = static_cast<std::uint8_t>(std::lround((field[i] - min) / span * 255.0));
    return GrayImage(width, height, std::move(px));
}

std::string to_string(Face face) { return face == Face::superior ? "superior" : "inferior"; }

Face parse_face(const std::string& text) {
    if (text == "superior") return Face::superior;
    if (text == "inferior") return Face::inferior;
    throw FormatError("unknown face '" + text + "' (expected superior or inferior)");
}

SampleManifest read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open manifest " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw FormatError("empty manifest " + path.string());
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    auto header = detail::split_csv(line);
    if (header != std::vector<std::string>{"path", "label", "sample_id", "face"})
        throw FormatError("manifest header must be 'path,label,sample_id,face'");

    const auto base = path.parent_path();
    SampleManifest m;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        auto f = detail::split_csv(line);
        if (f.size() != 4)
            throw FormatError("manifest line " + std::to_string(lineno) + ": expected 4 fields");
        ManifestEntry e;
        e.path = f[0];
        if (e.path.is_relative()) e.path = base / e.path;
        e.label = f[1];
        e.sample_id = f[2];
        e.face = parse_face(f[3]);
        if (e.label.empty() || e.sample_id.empty())
            throw FormatError("manifest line " + std::to_string(lineno) + ": empty label or id");
        for (const auto& other : m.entries)
            if (other.sample_id == e.sample_id && other.face == e.face)
                throw FormatError("duplicate (sample_id, face) '" + e.sample_id + "," +
                                  to_string(e.face) + "' in manifest");
        m.entries.push_back(std::move(e));
    }
    if (m.entries.empty()) throw FormatError("manifest has no entries");
    return m;
}

void write_manifest(const SampleManifest& manifest, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << "path,label,sample_id,face\n";
    for (const auto& e : manifest.entries)
        out << detail::quote_csv(e.path.generic_string()) << ',' << detail::quote_csv(e.label) << ','
            << detail::quote_csv(e.sample_id) << ',' << to_string(e.face) << '\n';
}

}  // namespace fraxel
