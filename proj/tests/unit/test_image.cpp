#include "fraxel/error.hpp"
#include "fraxel/image.hpp"

#include "../oracles.hpp"

#include <gtest/gtest.h>
#include <png.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>

namespace fs = std::filesystem;

namespace fraxel {
namespace {

class ImageFiles : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("fraxel_image_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path write_bytes(const std::string& name, const std::string& bytes) {
        auto p = dir_ / name;
        std::ofstream(p, std::ios::binary) << bytes;
        return p;
    }

    fs::path write_png(const std::string& name, int w, int h, png_uint_32 format,
                       const std::vector<std::uint8_t>& data) {
        auto p = dir_ / name;
        png_image img{};
        img.version = PNG_IMAGE_VERSION;
        img.width = static_cast<png_uint_32>(w);
        img.height = static_cast<png_uint_32>(h);
        img.format = format;
        EXPECT_TRUE(png_image_write_to_file(&img, p.c_str(), 0, data.data(), 0, nullptr)) << img.message;
        return p;
    }

    fs::path dir_;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

TEST_F(ImageFiles, BinaryGraymap) {
    auto p = write_bytes("a.pgm", std::string("P5\n2 2\n255\n") + std::string{'\x00', '\x40', '\x80', '\xff'});
    GrayImage img = load_image(p);
    EXPECT_EQ(img, GrayImage(2, 2, {0, 64, 128, 255}));
}

TEST_F(ImageFiles, AsciiGraymapWithComment) {
    auto p = write_bytes("a.pgm", "P2\n# scanner output\n2 2\n255\n0 64\n128 255\n");
    EXPECT_EQ(load_image(p), GrayImage(2, 2, {0, 64, 128, 255}));
}

TEST_F(ImageFiles, ColorPixmapUsesLuminance) {
    auto p = write_bytes("c.ppm", std::string("P6\n2 1\n255\n") +
                                      std::string{'\xff', '\xff', '\xff', 100, static_cast<char>(200), 50});
    GrayImage img = load_image(p);
    EXPECT_EQ(img.at(0, 0), 255);
    // 0.299*100 + 0.587*200 + 0.114*50 = 153.0
    EXPECT_EQ(img.at(0, 1), 153);
}

TEST(Luminance, RoundsHalfUp) {
    EXPECT_EQ(luminance(255, 255, 255), 255);
    EXPECT_EQ(luminance(0, 0, 0), 0);
    EXPECT_EQ(luminance(100, 200, 50), 153);
    // 0.299 * 5 = 1.495 -> 1 ; 0.587 * 1 + 0.299 * 3 = 1.484 -> 1 ; 0.114*22 = 2.508 -> 3
    EXPECT_EQ(luminance(5, 0, 0), 1);
    EXPECT_EQ(luminance(0, 0, 22), 3);
    // 0.5 exactly: 0.299*1 + 0.114*... use 0.587*0 + 0.299*0 + 0.114*x never hits .5; R=G=B=v is exact
    for (int v = 0; v < 256; ++v) EXPECT_EQ(luminance(v, v, v), v);
}

TEST_F(ImageFiles, PngGrayAndColor) {
    auto g = write_png("g.png", 2, 2, PNG_FORMAT_GRAY, {0, 64, 128, 255});
    EXPECT_EQ(load_image(g), GrayImage(2, 2, {0, 64, 128, 255}));
    auto c = write_png("c.png", 2, 1, PNG_FORMAT_RGB, {255, 255, 255, 100, 200, 50});
    EXPECT_EQ(load_image(c), GrayImage(2, 1, {255, 153}));
}

TEST_F(ImageFiles, RejectsSixteenBitInputs) {
    auto pgm = write_bytes("deep.pgm", std::string("P5\n1 1\n65535\n") + std::string{'\x00', '\x01'});
    EXPECT_THROW(load_image(pgm), FormatError);

    auto p = dir_ / "deep.png";
    png_image img{};
    img.version = PNG_IMAGE_VERSION;
    img.width = 1;
    img.height = 1;
    img.format = PNG_FORMAT_LINEAR_Y;
    std::uint16_t px = 1000;
    ASSERT_TRUE(png_image_write_to_file(&img, p.c_str(), 0, &px, 0, nullptr));
    EXPECT_THROW(load_image(p), FormatError);
}

TEST_F(ImageFiles, MissingAndUnknownFiles) {
    EXPECT_THROW(load_image(dir_ / "nope.pgm"), IoError);
    EXPECT_THROW(load_image(write_bytes("x.bin", "GIF89a....")), FormatError);
    EXPECT_THROW(load_image(write_bytes("t.pgm", "P5\n4 4\n255\nab")), FormatError);
}

TEST_F(ImageFiles, GraymapRoundTripIsByteIdentical) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 5; ++trial) {
        GrayImage img = oracle::random_image(7 + trial, 5, rng);
        save_pgm(img, dir_ / "first.pgm");
        GrayImage loaded = load_image(dir_ / "first.pgm");
        EXPECT_EQ(loaded, img);
        save_pgm(loaded, dir_ / "second.pgm");
        EXPECT_EQ(slurp(dir_ / "first.pgm"), slurp(dir_ / "second.pgm"));
    }
}

TEST(Surface, MapsPixelsToHeightField) {
    auto one = to_surface(GrayImage(1, 1, {5}));
    ASSERT_EQ(one.size(), 1u);
    EXPECT_EQ(one.points[0], (SurfacePoint{1, 1, 5}));

    auto row = to_surface(GrayImage(2, 1, {3, 7}));
    ASSERT_EQ(row.size(), 2u);
    EXPECT_EQ(row.points[0], (SurfacePoint{1, 1, 3}));
    EXPECT_EQ(row.points[1], (SurfacePoint{1, 2, 7}));
}

TEST(Surface, IsLossless) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        GrayImage img = oracle::random_image(1 + trial % 9, 1 + trial % 5, rng);
        auto s = to_surface(img);
        EXPECT_EQ(s.size(), img.pixels().size());
        EXPECT_EQ(from_surface(s), img);
    }
}

double mean_adjacent_difference(const GrayImage& img) {
    double sum = 0.0;
    int n = 0;
    for (int r = 0; r < img.height(); ++r)
        for (int c = 0; c + 1 < img.width(); ++c, ++n) sum += std::abs(img.at(r, c) - img.at(r, c + 1));
    for (int r = 0; r + 1 < img.height(); ++r)
        for (int c = 0; c < img.width(); ++c, ++n) sum += std::abs(img.at(r, c) - img.at(r + 1, c));
    return sum / n;
}

TEST(SynthFbm, DeterministicAndFullRange) {
    GrayImage a = synth_fbm(64, 64, 0.5, 42);
    GrayImage b = synth_fbm(64, 64, 0.5, 42);
    EXPECT_EQ(a, b);
    auto [lo, hi] = std::minmax_element(a.pixels().begin(), a.pixels().end());
    EXPECT_EQ(*lo, 0);
    EXPECT_EQ(*hi, 255);
    EXPECT_NE(synth_fbm(64, 64, 0.5, 43), a);
    GrayImage rect = synth_fbm(48, 20, 0.3, 1);
    EXPECT_EQ(rect.width(), 48);
    EXPECT_EQ(rect.height(), 20);
}

TEST(SynthFbm, HigherHurstIsSmoother) {
    double smooth = 0.0, rough = 0.0;
    for (std::uint64_t s = 1; s <= 10; ++s) {
        smooth += mean_adjacent_difference(synth_fbm(64, 64, 0.9, s));
        rough += mean_adjacent_difference(synth_fbm(64, 64, 0.1, s));
    }
    EXPECT_LT(smooth, rough);
}

TEST(SynthFbm, RejectsBadParameters) {
    EXPECT_THROW(synth_fbm(64, 64, 0.0, 1), ParameterError);
    EXPECT_THROW(synth_fbm(64, 64, 1.0, 1), ParameterError);
    EXPECT_THROW(synth_fbm(64, 64, -0.2, 1), ParameterError);
    EXPECT_THROW(synth_fbm(8, 64, 0.5, 1), ParameterError);
}

TEST_F(ImageFiles, ManifestResolvesRelativePaths) {
    auto m = write_bytes("manifest.csv",
                         "path,label,sample_id,face\n"
                         "a.pgm,decumbens,s1,superior\n"
                         "\"b,c.pgm\",decumbens,s1,inferior\n"
                         "/abs/x.png,brizantha,s2,superior\n");
    SampleManifest manifest = read_manifest(m);
    ASSERT_EQ(manifest.entries.size(), 3u);
    EXPECT_EQ(manifest.entries[0].path, dir_ / "a.pgm");
    EXPECT_EQ(manifest.entries[1].path, dir_ / "b,c.pgm");
    EXPECT_EQ(manifest.entries[1].face, Face::inferior);
    EXPECT_EQ(manifest.entries[2].path, fs::path("/abs/x.png"));
    EXPECT_EQ(manifest.entries[2].label, "brizantha");
}

TEST_F(ImageFiles, ManifestErrors) {
    EXPECT_THROW(read_manifest(write_bytes("h.csv", "file,label,id,face\n")), FormatError);
    EXPECT_THROW(read_manifest(write_bytes("dup.csv",
                                           "path,label,sample_id,face\n"
                                           "a.pgm,x,s1,superior\n"
                                           "b.pgm,x,s1,superior\n")),
                 FormatError);
    EXPECT_THROW(read_manifest(write_bytes("face.csv", "path,label,sample_id,face\na.pgm,x,s1,top\n")),
                 FormatError);
    EXPECT_THROW(read_manifest(write_bytes("empty.csv", "path,label,sample_id,face\n")), FormatError);
}

}  // namespace
}  // namespace fraxel
