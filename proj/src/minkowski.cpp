#include "fraxel/minkowski.hpp"

#include "fraxel/error.hpp"
#include "fraxel/regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

namespace fraxel {
namespace {

// Lower envelope of parabolas y = (x - q)^2 + f[q] over the sites with
// finite f (Felzenszwalb & Huttenlocher). Sites with f == kFarAway are
// absent; if none are present the output is all kFarAway.
class EnvelopeScratch {
public:
    explicit EnvelopeScratch(int n) : v_(n), z_(n + 1) {}

    // f is contiguous; d is written with the given stride.
    void transform(const std::int32_t* f, std::int32_t* d, int n, std::ptrdiff_t stride) {
        int k = -1;
        for (int q = 0; q < n; ++q) {
            const std::int64_t fq = f[q];
            if (fq == kFarAway) continue;
            const std::int64_t hq = fq + std::int64_t{q} * q;
            double s = -std::numeric_limits<double>::infinity();
            while (k >= 0) {
                const int p = v_[k];
                const std::int64_t hp = std::int64_t{f[p]} + std::int64_t{p} * p;
                s = static_cast<double>(hq - hp) / (2.0 * (q - p));
                if (s <= z_[k]) {
                    --k;
                    s = -std::numeric_limits<double>::infinity();
                } else {
                    break;
                }
            }
            ++k;
            v_[k] = q;
            z_[k] = s;
            z_[k + 1] = std::numeric_limits<double>::infinity();
        }
        if (k < 0) {
            for (int q = 0; q < n; ++q) d[q * stride] = kFarAway;
            return;
        }
        int j = 0;
        for (int q = 0; q < n; ++q) {
            while (z_[j + 1] < q) ++j;
            const std::int64_t dq = q - v_[j];
            d[q * stride] = static_cast<std::int32_t>(dq * dq + f[v_[j]]);
        }
    }

private:
    std::vector<int> v_;
    std::vector<double> z_;
};

struct VolumeGeometry {
    int pad = 0;
    int nx = 0;
    int ny = 0;
    int nz = 0;
    int k_origin = 0;
};

VolumeGeometry geometry_for(const SurfacePointSet& surface, double r_max,
                            std::uint64_t voxel_budget) {
    if (surface.points.empty()) throw ParameterError("surface is empty");
    if (!(r_max >= 1.0)) throw ParameterError("r_max must be >= 1");
    if (surface.points.size() != static_cast<std::size_t>(surface.width) * surface.height)
        throw ParameterError("surface is not a complete height field");
    VolumeGeometry g;
    g.pad = static_cast<int>(std::ceil(r_max - 1e-12));
    const int kmin = surface.min_intensity();
    const int kmax = surface.max_intensity();
    g.nx = surface.width + 2 * g.pad;
    g.ny = surface.height + 2 * g.pad;
    g.nz = kmax - kmin + 1 + 2 * g.pad;
    g.k_origin = kmin - g.pad;
    const std::uint64_t voxels =
        std::uint64_t(g.nx) * std::uint64_t(g.ny) * std::uint64_t(g.nz);
    if (voxels > voxel_budget)
        throw ResourceError("distance volume of " + std::to_string(voxels) +
                            " voxels exceeds the budget of " + std::to_string(voxel_budget));
    return g;
}

// Squared distances within one intensity slice. Surface points whose
// intensity offset squared exceeds `threshold` are left out; this only
// changes values that are already larger than `threshold`.
class SliceTransform {
public:
    SliceTransform(const SurfacePointSet& surface, const VolumeGeometry& g)
        : surface_(surface), g_(g), grid_(std::size_t(g.nx) * g.ny),
          line_(std::max(g.nx, g.ny)), scratch_(std::max(g.nx, g.ny)) {}

    // Returns false when no surface point is in range of the slice.
    bool compute(int z, std::int64_t threshold) {
        std::fill(grid_.begin(), grid_.end(), kFarAway);
        const int level = g_.k_origin + z;
        bool any = false;
        for (int r = 0; r < surface_.height; ++r) {
            const int y = r + g_.pad;
            std::int32_t* row = grid_.data() + std::size_t(y) * g_.nx;
            bool row_any = false;
            const SurfacePoint* pts = surface_.points.data() + std::size_t(r) * surface_.width;
            for (int c = 0; c < surface_.width; ++c) {
                const std::int64_t dz = level - pts[c].k;
                if (dz * dz <= threshold) {
                    row[c + g_.pad] = static_cast<std::int32_t>(dz * dz);
                    row_any = true;
                }
            }
            if (!row_any) continue;
            any = true;
            std::copy(row, row + g_.nx, line_.begin());
            scratch_.transform(line_.data(), row, g_.nx, 1);
        }
        if (!any) return false;
        for (int x = 0; x < g_.nx; ++x) {
            std::int32_t* col = grid_.data() + x;
            for (int y = 0; y < g_.ny; ++y) line_[y] = col[std::size_t(y) * g_.nx];
            scratch_.transform(line_.data(), col, g_.ny, g_.nx);
        }
        return true;
    }

    const std::vector<std::int32_t>& grid() const { return grid_; }

private:
    const SurfacePointSet& surface_;
    VolumeGeometry g_;
    std::vector<std::int32_t> grid_;
    std::vector<std::int32_t> line_;
    EnvelopeScratch scratch_;
};

template <typename Body>
void for_slices(int nz, int threads, Body body) {
    threads = std::clamp(threads, 1, std::max(1, nz));
    if (threads == 1) {
        body(0, 0, nz);
        return;
    }
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) {
        const int begin = static_cast<int>(std::int64_t(nz) * t / threads);
        const int end = static_cast<int>(std::int64_t(nz) * (t + 1) / threads);
        pool.emplace_back([=] { body(t, begin, end); });
    }
}

DilationVolumeCurve curve_from_histogram(const std::vector<std::uint64_t>& hist,
                                         std::uint64_t surface_size, double r_max) {
    DilationVolumeCurve curve;
    curve.surface_size = surface_size;
    curve.r_max = r_max;
    curve.squared_radii = attainable_squared_radii(r_max);
    std::uint64_t running = hist[0];
    std::size_t next = 1;
    for (int n : curve.squared_radii) {
        for (; next <= static_cast<std::size_t>(n); ++next) running += hist[next];
        curve.radii.push_back(std::sqrt(static_cast<double>(n)));
        curve.volumes.push_back(running);
    }
    return curve;
}

int max_squared_radius(double r_max) {
    return static_cast<int>(std::floor(r_max * r_max + 1e-9));
}

}  // namespace

DistanceField edt3d(const SurfacePointSet& surface, double r_max, std::uint64_t voxel_budget,
                    int threads) {
    const VolumeGeometry g = geometry_for(surface, r_max, voxel_budget);
    DistanceField field;
    field.nx = g.nx;
    field.ny = g.ny;
    field.nz = g.nz;
    field.pad = g.pad;
    field.k_origin = g.k_origin;
    field.sqdist.assign(std::size_t(g.nx) * g.ny * g.nz, kFarAway);
    const std::size_t slice = std::size_t(g.nx) * g.ny;
    for_slices(g.nz, threads, [&](int, int begin, int end) {
        SliceTransform tf(surface, g);
        for (int z = begin; z < end; ++z) {
            tf.compute(z, std::numeric_limits<std::int64_t>::max());
            std::copy(tf.grid().begin(), tf.grid().end(), field.sqdist.begin() + z * slice);
        }
    });
    return field;
}

std::vector<int> attainable_squared_radii(double r_max) {
    std::vector<int> out;
    const int limit = max_squared_radius(r_max);
    for (int n = 1; n <= limit; ++n) {
        // Legendre: n is a sum of three squares unless n = 4^a (8b + 7)
        int m = n;
        while (m % 4 == 0) m /= 4;
        if (m % 8 != 7) out.push_back(n);
    }
    return out;
}

std::uint64_t DilationVolumeCurve::volume_at(double r) const {
    if (r < 0.0 || r > r_max + 1e-12) throw ParameterError("radius outside the sampled curve");
    std::uint64_t v = surface_size;
    for (std::size_t i = 0; i < squared_radii.size() && squared_radii[i] <= r * r + 1e-9; ++i)
        v = volumes[i];
    return v;
}

DilationVolumeCurve dilation_volumes(const SurfacePointSet& surface, double r_max,
                                     std::uint64_t voxel_budget, int threads) {
    const VolumeGeometry g = geometry_for(surface, r_max, voxel_budget);
    const int limit = max_squared_radius(r_max);
    threads = std::max(1, threads);
    std::vector<std::vector<std::uint64_t>> partial(
        std::size_t(std::clamp(threads, 1, g.nz)), std::vector<std::uint64_t>(limit + 1, 0));
    for_slices(g.nz, threads, [&](int t, int begin, int end) {
        SliceTransform tf(surface, g);
        auto& hist = partial[t];
        for (int z = begin; z < end; ++z) {
            if (!tf.compute(z, limit)) continue;
            for (std::int32_t d : tf.grid())
                if (d <= limit) ++hist[d];
        }
    });
    std::vector<std::uint64_t> hist(limit + 1, 0);
    for (const auto& h : partial)
        for (int i = 0; i <= limit; ++i) hist[i] += h[i];
    return curve_from_histogram(hist, surface.size(), r_max);
}

DilationVolumeCurve dilation_volumes(const DistanceField& field, std::uint64_t surface_size,
                                     double r_max) {
    if (!(r_max >= 1.0)) throw ParameterError("r_max must be >= 1");
    if (r_max > field.pad + 1e-12)
        throw ParameterError("r_max exceeds the padding of the distance field");
    const int limit = max_squared_radius(r_max);
    std::vector<std::uint64_t> hist(limit + 1, 0);
    for (std::int32_t d : field.sqdist)
        if (d <= limit) ++hist[d];
    return curve_from_histogram(hist, surface_size, r_max);
}

std::vector<double> bm_descriptors(const DilationVolumeCurve& curve) {
    if (curve.volumes.empty()) throw ParameterError("empty dilation curve");
    std::vector<double> out;
    out.reserve(curve.volumes.size());
    for (auto v : curve.volumes) out.push_back(std::log(static_cast<double>(v)));
    return out;
}

double bm_dimension(const DilationVolumeCurve& curve) {
    if (curve.radii.size() < 2) throw ParameterError("dimension fit needs at least two radii");
    std::vector<double> vols(curve.volumes.begin(), curve.volumes.end());
    return 3.0 - loglog_slope(curve.radii, vols).slope;
}

}  // namespace fraxel
