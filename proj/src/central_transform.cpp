#include "heisenfft/central_transform.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace heisenfft {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

// Batch 1D DFT of length M over every z-column; sign = FFTW_FORWARD (-i) or
// FFTW_BACKWARD (+i).  Unnormalized, in place.
void dft_columns(std::vector<cplx>& data, std::size_t nz, unsigned M, int sign) {
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        int n = static_cast<int>(M);
        plan = fftw_plan_many_dft(1, &n, static_cast<int>(nz), ptr, nullptr, 1, n,
                                  ptr, nullptr, 1, n, sign, FFTW_ESTIMATE);
    }
    if (!plan) throw std::runtime_error("central transform: FFTW plan failed");
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
}

} // namespace

LambdaStack::LambdaStack(const SpatialGrid& g, const CentralAxis& ax)
    : grid(g), axis(ax), excluded_mask(ax.points(), false) {
    slices.reserve(axis.points());
    for (unsigned k = 0; k < axis.points(); ++k) slices.emplace_back(grid);
}

double LambdaStack::slice_mass(unsigned k) const { return norm_sq(slices[k]); }

double LambdaStack::total_mass() const {
    double acc = 0.0;
    for (unsigned k = 0; k < axis.points(); ++k) acc += slice_mass(k);
    return acc;
}

LambdaStack forward_central(const HeisenbergSample& f) {
    const unsigned M = f.axis.points();
    const std::size_t nz = f.grid.size();
    LambdaStack stack(f.grid, f.axis);

    std::vector<cplx> work = f.values;
    dft_columns(work, nz, M, FFTW_BACKWARD);   // G_m = sum_j f_j e^{+2pi i jm/M}

    // F_k = dt * (-1)^{k - M/2} * G_{(k + M/2) mod M}
    const double dt = f.axis.dt();
    for (unsigned k = 0; k < M; ++k) {
        const int kc = stack.axis.freq_index(k);
        const double sgn = (kc % 2 == 0) ? 1.0 : -1.0;
        const unsigned m = (k + M / 2) % M;
        auto& dst = stack.slices[k].values;
        for (std::size_t zi = 0; zi < nz; ++zi) dst[zi] = dt * sgn * work[zi * M + m];
    }
    return stack;
}

HeisenbergSample inverse_central(const LambdaStack& stack) {
    const unsigned M = stack.axis.points();
    const std::size_t nz = stack.grid.size();

    std::vector<cplx> work(nz * M);
    for (unsigned k = 0; k < M; ++k) {
        const int kc = stack.axis.freq_index(k);
        const double sgn = (kc % 2 == 0) ? 1.0 : -1.0;
        const unsigned m = (k + M / 2) % M;
        const auto& src = stack.slices[k].values;
        for (std::size_t zi = 0; zi < nz; ++zi) work[zi * M + m] = sgn * src[zi];
    }
    dft_columns(work, nz, M, FFTW_FORWARD);    // sum_m H_m e^{-2pi i jm/M}

    const double scale = 1.0 / (2.0 * stack.axis.extent());
    HeisenbergSample out(stack.grid, stack.axis);
    for (std::size_t i = 0; i < work.size(); ++i) out.values[i] = scale * work[i];
    return out;
}

} // namespace heisenfft
