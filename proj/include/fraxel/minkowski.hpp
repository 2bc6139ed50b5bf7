#pragma once

#include "fraxel/image.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace fraxel {

inline constexpr std::uint64_t kDefaultVoxelBudget = std::uint64_t{1} << 31;

/// Squared Euclidean distances from every voxel of the padded bounding
/// volume of a surface to the nearest surface point.
///
/// The volume spans columns [1 - pad, width + pad], rows [1 - pad,
/// height + pad] and intensities [kmin - pad, kmax + pad], where pad =
/// ceil(r_max). Storage is z-major: index = (z * ny + y) * nx + x.
struct DistanceField {
    int nx = 0;  // columns
    int ny = 0;  // rows
    int nz = 0;  // intensity levels
    int pad = 0;
    int k_origin = 0;  // intensity of z index 0
    std::vector<std::int32_t> sqdist;

    std::int32_t at(int x, int y, int z) const {
        return sqdist[(static_cast<std::size_t>(z) * ny + y) * nx + x];
    }
    /// Voxel coordinates (column, row, intensity) of index (x, y, z) in the
    /// surface's own frame.
    std::array<int, 3> coords(int x, int y, int z) const {
        return {x + 1 - pad, y + 1 - pad, z + k_origin};
    }
    std::uint64_t voxels() const { return sqdist.size(); }
};

/// Value stored for voxels with no surface point in range. Never produced by
/// edt3d itself (every voxel of the padded box has a finite distance).
inline constexpr std::int32_t kFarAway = INT32_MAX;

/// Exact separable squared EDT (lower envelope of parabolas along rows then
/// columns, starting from the per-column intensity offsets of the height
/// field). Integer arithmetic throughout.
DistanceField edt3d(const SurfacePointSet& surface, double r_max,
                    std::uint64_t voxel_budget = kDefaultVoxelBudget, int threads = 1);

/// All n in [1, floor(r_max^2)] expressible as a sum of three squares; the
/// attainable squared lattice distances.
std::vector<int> attainable_squared_radii(double r_max);

struct DilationVolumeCurve {
    std::vector<int> squared_radii;       // strictly increasing
    std::vector<double> radii;            // sqrt of the above
    std::vector<std::uint64_t> volumes;   // V(r): voxels with sqdist <= r^2
    std::uint64_t surface_size = 0;       // |S|, the volume for r < 1
    double r_max = 0.0;

    /// V at any radius in [0, r_max] (step function of the sampled curve).
    std::uint64_t volume_at(double r) const;
};

/// Dilation volume curve at every attainable radius 0 < r <= r_max.
/// Streams the distance transform slice by slice without materializing the
/// volume; only surface points within r_max of a slice take part.
DilationVolumeCurve dilation_volumes(const SurfacePointSet& surface, double r_max,
                                     std::uint64_t voxel_budget = kDefaultVoxelBudget,
                                     int threads = 1);

/// Same curve from a materialized field (reference path for tests).
DilationVolumeCurve dilation_volumes(const DistanceField& field, std::uint64_t surface_size,
                                     double r_max);

/// [ln V(r_1), ..., ln V(r_K)] in increasing radius order.
std::vector<double> bm_descriptors(const DilationVolumeCurve& curve);

/// 3 - slope of the least-squares fit of ln V(r) on ln r.
double bm_dimension(const DilationVolumeCurve& curve);

}  // namespace fraxel
