#include "fraxel/voss.hpp"

#include "fraxel/error.hpp"
#include "fraxel/regression.hpp"

#include <algorithm>
#include <cmath>

namespace fraxel {

std::uint64_t ProbabilityCurve::max_points_per_cube(int delta) const {
    return std::min<std::uint64_t>(std::uint64_t(delta) * std::uint64_t(delta), surface_size);
}

ProbabilityCurve probability_curve(const SurfacePointSet& surface, std::vector<int> deltas) {
    if (surface.points.empty()) throw ParameterError("surface is empty");
    if (deltas.empty()) throw ParameterError("no cube sides given");
    std::sort(deltas.begin(), deltas.end());
    if (std::adjacent_find(deltas.begin(), deltas.end()) != deltas.end())
        throw ParameterError("cube sides must be distinct");
    const int limit = std::min(surface.width, surface.height);
    for (int d : deltas)
        if (d < 2 || d > limit)
            throw ParameterError("cube side " + std::to_string(d) + " outside [2, " +
                                 std::to_string(limit) + "]");

    ProbabilityCurve curve;
    curve.deltas = deltas;
    curve.surface_size = surface.size();
    const int kmin = surface.min_intensity();
    const int kmax = surface.max_intensity();
    std::vector<std::uint32_t> counts;
    for (int d : deltas) {
        const std::size_t gx = (surface.width + d - 1) / d;
        const std::size_t gy = (surface.height + d - 1) / d;
        const std::size_t gz = static_cast<std::size_t>(kmax - kmin) / d + 1;
        counts.assign(gx * gy * gz, 0);
        for (const auto& p : surface.points) {
            const std::size_t cx = (p.j - 1) / d;
            const std::size_t cy = (p.i - 1) / d;
            const std::size_t cz = static_cast<std::size_t>(p.k - kmin) / d;
            ++counts[(cz * gy + cy) * gx + cx];
        }
        std::map<int, std::uint64_t> by_size;
        std::uint64_t occupied = 0;
        for (auto c : counts) {
            if (c == 0) continue;
            ++by_size[static_cast<int>(c)];
            ++occupied;
        }
        std::map<int, double> p_m;
        double info = 0.0;
        for (auto [m, n] : by_size) {
            const double p = static_cast<double>(n) / static_cast<double>(occupied);
            p_m[m] = p;
            info += p / m;
        }
        curve.occupancy.push_back(std::move(p_m));
        curve.information.push_back(info);
    }
    return curve;
}

std::vector<double> voss_descriptors(const ProbabilityCurve& curve) {
    if (curve.information.empty()) throw ParameterError("empty probability curve");
    std::vector<double> out;
    out.reserve(curve.information.size());
    for (double v : curve.information) out.push_back(std::log(v));
    return out;
}

double voss_dimension(const ProbabilityCurve& curve) {
    if (curve.deltas.size() < 2) throw ParameterError("dimension fit needs at least two cube sides");
    std::vector<double> xs(curve.deltas.begin(), curve.deltas.end());
    return -loglog_slope(xs, curve.information).slope;
}

}  // namespace fraxel
