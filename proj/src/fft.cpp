#include "fft.hpp"

#include <fftw3.h>

#include <mutex>

namespace fraxel::detail {
namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

void fft2d(std::vector<Complex>& data, int width, int height, bool inverse) {
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_2d(height, width, buf, buf, inverse ? FFTW_BACKWARD : FFTW_FORWARD,
                                FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
}

std::vector<double> irfft2d(std::vector<Complex> half, int width, int height) {
    std::vector<double> out(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_c2r_2d(height, width, reinterpret_cast<fftw_complex*>(half.data()),
                                    out.data(), FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
    return out;
}

}  // namespace fraxel::detail
