#include "fraxel/error.hpp"
#include "fraxel/preprocess.hpp"

#include "../oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace fraxel {
namespace {

GrayImage vertical_stripes(int size, int period) {
    GrayImage img(size, size);
    for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c) img.at(r, c) = (c / (period / 2)) % 2 ? 220 : 30;
    return img;
}

TEST(Rotate, ZeroAngleIsIdentity) {
    std::mt19937_64 rng(5);
    GrayImage img = oracle::random_image(17, 11, rng);
    EXPECT_EQ(rotate_image(img, 0.0), img);
}

TEST(Rotate, QuarterTurnMovesCorners) {
    GrayImage img(5, 5, 0);
    img.at(0, 2) = 200;  // top middle
    GrayImage turned = rotate_image(img, 90.0, 0);
    // counterclockwise: top goes to the left
    EXPECT_EQ(turned.at(2, 0), 200);
    EXPECT_EQ(turned.at(0, 2), 0);
}

TEST(RadonAlign, AlignedStripesAreLeftAlone) {
    GrayImage img = vertical_stripes(121, 12);
    AlignmentResult r = radon_align(img, 1.0);
    EXPECT_EQ(r.angle, 0.0);
    EXPECT_EQ(r.image, img);
}

TEST(RadonAlign, RecoversKnownRotation) {
    GrayImage img = rotate_image(vertical_stripes(161, 16), 10.0, 128);
    AlignmentResult r = radon_align(img, 1.0);
    EXPECT_NEAR(r.angle, -10.0, 1.0);
    EXPECT_GT(projection_variance(img, r.angle), projection_variance(img, 0.0));
}

TEST(RadonAlign, RecoversNegativeRotation) {
    GrayImage img = rotate_image(vertical_stripes(161, 16), -7.0, 128);
    EXPECT_NEAR(radon_align(img, 0.5).angle, 7.0, 0.5);
}

TEST(RadonAlign, Errors) {
    EXPECT_THROW(radon_align(GrayImage(32, 32, 90), 1.0), DegenerateInputError);
    GrayImage img = vertical_stripes(32, 8);
    EXPECT_THROW(radon_align(img, 0.0), ParameterError);
    EXPECT_THROW(radon_align(img, 6.0), ParameterError);
}

bool disjoint(const WindowSet& w) {
    for (std::size_t a = 0; a < w.origins.size(); ++a)
        for (std::size_t b = a + 1; b < w.origins.size(); ++b) {
            const auto& p = w.origins[a];
            const auto& q = w.origins[b];
            const bool apart = p.row + w.size <= q.row || q.row + w.size <= p.row ||
                               p.col + w.size <= q.col || q.col + w.size <= p.col;
            if (!apart) return false;
        }
    return true;
}

TEST(Windows, TwentyFitInAThousandSquare) {
    std::mt19937_64 rng(1);
    GrayImage img = oracle::random_image(1000, 1000, rng);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        WindowSet w = extract_windows(img, 200, 20, seed);
        ASSERT_EQ(w.windows.size(), 20u) << "seed " << seed;
        ASSERT_EQ(w.origins.size(), 20u);
        EXPECT_TRUE(disjoint(w));
        for (std::size_t i = 0; i < w.windows.size(); ++i) {
            const auto& o = w.origins[i];
            EXPECT_GE(o.row, 0);
            EXPECT_GE(o.col, 0);
            EXPECT_LE(o.row + 200, 1000);
            EXPECT_LE(o.col + 200, 1000);
            EXPECT_EQ(w.windows[i], img.crop(o.row, o.col, 200, 200));
        }
    }
}

TEST(Windows, ExactFitAndTooSmall) {
    GrayImage exact(200, 200, 7);
    WindowSet w = extract_windows(exact, 200, 5, 3);
    ASSERT_EQ(w.windows.size(), 1u);
    EXPECT_EQ(w.origins[0], (WindowOrigin{0, 0}));
    EXPECT_THROW(extract_windows(GrayImage(150, 150), 200, 1, 1), ParameterError);
    EXPECT_THROW(extract_windows(GrayImage(300, 300), 200, 1, 1, 60), ParameterError);
}

TEST(Windows, MarginAndDeterminism) {
    std::mt19937_64 rng(2);
    GrayImage img = oracle::random_image(300, 260, rng);
    WindowSet a = extract_windows(img, 40, 12, 9, 10);
    WindowSet b = extract_windows(img, 40, 12, 9, 10);
    ASSERT_EQ(a.origins, b.origins);
    EXPECT_EQ(a.windows.size(), 12u);
    EXPECT_TRUE(disjoint(a));
    for (const auto& o : a.origins) {
        EXPECT_GE(o.row, 10);
        EXPECT_GE(o.col, 10);
        EXPECT_LE(o.row + 40, 250);
        EXPECT_LE(o.col + 40, 290);
    }
    EXPECT_NE(extract_windows(img, 40, 12, 10, 10).origins, a.origins);
}

}  // namespace
}  // namespace fraxel
