#pragma once

#include "fraxel/image.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace fraxel {

inline const std::vector<int> kDefaultDeltas{2, 3, 4, 6, 8, 11, 16, 23, 32};

/// Occupancy statistics of a fixed cube grid at each cube side delta.
struct ProbabilityCurve {
    std::vector<int> deltas;          // strictly increasing
    std::vector<double> information;  // N_P(delta) = sum_m p_m(delta) / m
    /// Per delta: m -> p_m, over occupied cubes only (sparse).
    std::vector<std::map<int, double>> occupancy;
    std::uint64_t surface_size = 0;

    /// Largest number of surface points one cube can hold: min(delta^2, |S|).
    std::uint64_t max_points_per_cube(int delta) const;
};

/// Partitions the surface's box into delta x delta x delta cubes anchored at
/// pixel (1, 1) and the lowest intensity and histograms the point count of every
/// occupied cube. Deltas are sorted; each must satisfy
/// 2 <= delta <= min(width, height).
ProbabilityCurve probability_curve(const SurfacePointSet& surface, std::vector<int> deltas);

/// [ln N_P(delta_1), ..., ln N_P(delta_K)].
std::vector<double> voss_descriptors(const ProbabilityCurve& curve);

/// -(slope of ln N_P on ln delta).
double voss_dimension(const ProbabilityCurve& curve);

}  // namespace fraxel
