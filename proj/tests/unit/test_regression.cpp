#include "fraxel/error.hpp"
#include "fraxel/regression.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace fraxel {
namespace {

TEST(LinearFit, ExactLine) {
    std::vector<double> x{1, 2, 3, 4}, y{3, 5, 7, 9};
    FitResult f = linear_fit(x, y);
    EXPECT_NEAR(f.slope, 2.0, 1e-12);
    EXPECT_NEAR(f.intercept, 1.0, 1e-12);
    EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
}

TEST(LinearFit, NoisyLine) {
    std::vector<double> x{0, 1, 2}, y{0, 2, 1};
    FitResult f = linear_fit(x, y);
    EXPECT_NEAR(f.slope, 0.5, 1e-12);
    EXPECT_NEAR(f.intercept, 0.5, 1e-12);
    EXPECT_NEAR(f.r_squared, 0.25, 1e-12);
}

TEST(LinearFit, FlatResponse) {
    std::vector<double> x{1, 2, 3}, y{4, 4, 4};
    FitResult f = linear_fit(x, y);
    EXPECT_EQ(f.slope, 0.0);
    EXPECT_EQ(f.intercept, 4.0);
}

TEST(LoglogSlope, PowerLaw) {
    std::vector<double> x{1, 2, 4, 8}, y;
    for (double v : x) y.push_back(5.0 * std::pow(v, -1.5));
    FitResult f = loglog_slope(x, y);
    EXPECT_NEAR(f.slope, -1.5, 1e-12);
    EXPECT_NEAR(f.intercept, std::log(5.0), 1e-12);
}

TEST(LoglogSlope, SimpleLaws) {
    std::vector<double> x{1, 2, 4};
    FitResult lin = loglog_slope(x, std::vector<double>{3, 6, 12});
    EXPECT_NEAR(lin.slope, 1.0, 1e-12);
    EXPECT_NEAR(lin.intercept, std::log(3.0), 1e-12);
    EXPECT_NEAR(lin.r_squared, 1.0, 1e-12);
    EXPECT_NEAR(loglog_slope(x, std::vector<double>{1, 4, 16}).slope, 2.0, 1e-12);
    EXPECT_NEAR(loglog_slope(x, std::vector<double>{5, 5, 5}).slope, 0.0, 1e-12);
}

TEST(LoglogSlope, ScaleEquivariance) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.5, 20.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> x(6), y(6), x2(6), y2(6);
        for (int i = 0; i < 6; ++i) x[i] = u(rng), y[i] = u(rng);
        const double a = u(rng), b = u(rng);
        for (int i = 0; i < 6; ++i) x2[i] = a * x[i], y2[i] = b * y[i];
        EXPECT_NEAR(loglog_slope(x, y).slope, loglog_slope(x2, y2).slope, 1e-9);
    }
}

TEST(LinearFit, OrderDoesNotMatter) {
    std::vector<double> x{1, 5, 2, 8, 3}, y{2, 9, 1, 7, 4};
    FitResult base = linear_fit(x, y);
    std::vector<int> idx{0, 1, 2, 3, 4};
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 10; ++trial) {
        std::shuffle(idx.begin(), idx.end(), rng);
        std::vector<double> px, py;
        for (int i : idx) px.push_back(x[i]), py.push_back(y[i]);
        FitResult f = linear_fit(px, py);
        EXPECT_NEAR(f.slope, base.slope, 1e-12);
        EXPECT_NEAR(f.intercept, base.intercept, 1e-12);
    }
}

TEST(LinearFit, Errors) {
    std::vector<double> one{1}, two{1, 2}, same{3, 3}, neg{-1, 2};
    EXPECT_THROW(linear_fit(one, one), ParameterError);
    EXPECT_THROW(linear_fit(two, one), ParameterError);
    EXPECT_THROW(linear_fit(same, two), ParameterError);
    EXPECT_THROW(loglog_slope(neg, two), ParameterError);
    EXPECT_THROW(loglog_slope(two, neg), ParameterError);
}

}  // namespace
}  // namespace fraxel
