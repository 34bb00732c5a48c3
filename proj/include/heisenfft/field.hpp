#pragma once

#include <complex>
#include <vector>

#include "heisenfft/grid.hpp"

namespace heisenfft {

using cplx = std::complex<double>;

class IndicatorSet;

/// One lambda-slice: a sampled complex function on a SpatialGrid.
/// values has length grid.size(), row-major over (x_1..x_n, y_1..y_n).
struct Slice2N {
    SpatialGrid grid;
    std::vector<cplx> values;

    Slice2N(const SpatialGrid& g) : grid(g), values(g.size(), cplx(0.0)) {}
    Slice2N(const SpatialGrid& g, std::vector<cplx> v) : grid(g), values(std::move(v)) {
        if (values.size() != grid.size())
            throw std::invalid_argument("Slice2N: value count != grid size");
    }
};

/// Sampled complex function on (z, t): values[zi*M + j] = f(z_i, t_j)
/// (t is the fastest axis).
struct HeisenbergSample {
    SpatialGrid grid;
    CentralAxis axis;
    std::vector<cplx> values;

    HeisenbergSample(const SpatialGrid& g, const CentralAxis& ax)
        : grid(g), axis(ax), values(g.size() * ax.points(), cplx(0.0)) {}
    HeisenbergSample(const SpatialGrid& g, const CentralAxis& ax, std::vector<cplx> v)
        : grid(g), axis(ax), values(std::move(v)) {
        if (values.size() != grid.size() * axis.points())
            throw std::invalid_argument("HeisenbergSample: value count mismatch");
    }

    cplx& at(std::size_t zi, unsigned j) { return values[zi * axis.points() + j]; }
    const cplx& at(std::size_t zi, unsigned j) const { return values[zi * axis.points() + j]; }
};

/// Discrete squared L^2 norm h^{2n} * sum |v_k|^2, optionally restricted to a
/// region mask.  Throws on grid mismatch between slice and region.
double norm_sq(const Slice2N& slice);
double norm_sq(const Slice2N& slice, const IndicatorSet& region);

/// Discrete squared L^2 norm over (z, t): h^{2n} * dt * sum |v|^2.
double norm_sq(const HeisenbergSample& f);

/// As above but with the z-sum restricted to a region (all t kept).
double norm_sq(const HeisenbergSample& f, const IndicatorSet& z_region);

/// max |v| over the outermost index layer of each spatial axis, divided by
/// max |v| overall; 0 for the zero field.  Periodic-truncation health check.
double boundary_decay_ratio(const Slice2N& slice);

} // namespace heisenfft
