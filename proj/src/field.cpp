#include "heisenfft/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "heisenfft/indicator_set.hpp"

namespace heisenfft {

double norm_sq(const Slice2N& slice) {
    double acc = 0.0;
    for (const cplx& v : slice.values) acc += std::norm(v);
    return slice.grid.cell_volume() * acc;
}

double norm_sq(const Slice2N& slice, const IndicatorSet& region) {
    if (region.grid() != slice.grid)
        throw std::invalid_argument("norm_sq: region mask lives on a different grid");
    double acc = 0.0;
    const auto& mask = region.mask();
    for (std::size_t i = 0; i < slice.values.size(); ++i)
        if (mask[i]) acc += std::norm(slice.values[i]);
    return slice.grid.cell_volume() * acc;
}

double norm_sq(const HeisenbergSample& f) {
    double acc = 0.0;
    for (const cplx& v : f.values) acc += std::norm(v);
    return f.grid.cell_volume() * f.axis.dt() * acc;
}

double norm_sq(const HeisenbergSample& f, const IndicatorSet& z_region) {
    if (z_region.grid() != f.grid)
        throw std::invalid_argument("norm_sq: region mask lives on a different grid");
    const unsigned M = f.axis.points();
    double acc = 0.0;
    for (std::size_t zi = 0; zi < f.grid.size(); ++zi) {
        if (!z_region.contains(zi)) continue;
        const cplx* col = f.values.data() + zi * M;
        for (unsigned j = 0; j < M; ++j) acc += std::norm(col[j]);
    }
    return f.grid.cell_volume() * f.axis.dt() * acc;
}

double boundary_decay_ratio(const Slice2N& slice) {
    const unsigned N = slice.grid.points_per_axis();
    const unsigned axes = slice.grid.axes();
    double vmax = 0.0, bmax = 0.0;
    unsigned ka[4];
    for (std::size_t i = 0; i < slice.values.size(); ++i) {
        const double a = std::abs(slice.values[i]);
        vmax = std::max(vmax, a);
        slice.grid.unflatten(i, ka);
        bool boundary = false;
        for (unsigned ax = 0; ax < axes; ++ax)
            if (ka[ax] == 0 || ka[ax] == N - 1) { boundary = true; break; }
        if (boundary) bmax = std::max(bmax, a);
    }
    return vmax > 0.0 ? bmax / vmax : 0.0;
}

} // namespace heisenfft
