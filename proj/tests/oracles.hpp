#pragma once

// Brute-force reference implementations used only by tests. They share no
// code with the library paths they check.

#include "fraxel/image.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <tuple>
#include <vector>

namespace fraxel::oracle {

/// Minimum squared distance from (x, y, z) to any surface point, by
/// exhaustive search. Coordinates are (column, row, intensity).
inline std::int64_t nearest_sqdist(const SurfacePointSet& s, int x, int y, int z) {
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    for (const auto& p : s.points) {
        const std::int64_t dx = x - p.j, dy = y - p.i, dz = z - p.k;
        best = std::min(best, dx * dx + dy * dy + dz * dz);
    }
    return best;
}

/// Number of integer lattice points within squared radius r2 of the origin.
inline std::uint64_t lattice_ball(int r2) {
    std::uint64_t n = 0;
    int r = 0;
    while ((r + 1) * (r + 1) <= r2) ++r;
    for (int x = -r; x <= r; ++x)
        for (int y = -r; y <= r; ++y)
            for (int z = -r; z <= r; ++z)
                if (x * x + y * y + z * z <= r2) ++n;
    return n;
}

/// Size of the union of lattice balls of squared radius r2 around every
/// surface point.
inline std::uint64_t dilation_union(const SurfacePointSet& s, int r2) {
    std::set<std::tuple<int, int, int>> voxels;
    int r = 0;
    while ((r + 1) * (r + 1) <= r2) ++r;
    for (const auto& p : s.points)
        for (int x = -r; x <= r; ++x)
            for (int y = -r; y <= r; ++y)
                for (int z = -r; z <= r; ++z)
                    if (x * x + y * y + z * z <= r2) voxels.emplace(p.j + x, p.i + y, p.k + z);
    return voxels.size();
}

/// All n in [1, limit] equal to a^2 + b^2 + c^2 for some integers a, b, c.
inline std::vector<int> sums_of_three_squares(int limit) {
    std::set<int> found;
    for (int a = 0; a * a <= limit; ++a)
        for (int b = a; a * a + b * b <= limit; ++b)
            for (int c = b; a * a + b * b + c * c <= limit; ++c) {
                const int n = a * a + b * b + c * c;
                if (n >= 1) found.insert(n);
            }
    return {found.begin(), found.end()};
}

/// Occupied-cube histogram m -> number of cubes holding exactly m points,
/// by assigning every point to its cube with a plain triple-index key.
inline std::map<int, int> naive_cube_histogram(const SurfacePointSet& s, int delta) {
    int kmin = 255;
    for (const auto& p : s.points) kmin = std::min(kmin, p.k);
    std::map<std::tuple<int, int, int>, int> cubes;
    for (const auto& p : s.points) ++cubes[{(p.j - 1) / delta, (p.i - 1) / delta, (p.k - kmin) / delta}];
    std::map<int, int> hist;
    for (const auto& [key, m] : cubes) ++hist[m];
    return hist;
}

inline GrayImage random_image(int w, int h, std::mt19937_64& rng, int lo = 0, int hi = 255) {
    std::uniform_int_distribution<int> dist(lo, hi);
    std::vector<std::uint8_t> px(static_cast<std::size_t>(w) * h);
    for (auto& v : px) v = static_cast<std::uint8_t>(dist(rng));
    return GrayImage(w, h, std::move(px));
}

}  // namespace fraxel::oracle
