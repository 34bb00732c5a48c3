#pragma once

#include <vector>

#include "heisenfft/grid.hpp"

namespace heisenfft {

/// Measurable subset of the grid box: a boolean mask plus its measure
/// h^{2n} * (number of true cells).  Mask membership is by cell sample point.
class IndicatorSet {
public:
    explicit IndicatorSet(const SpatialGrid& g)
        : grid_(g), mask_(g.size(), false) {}
    IndicatorSet(const SpatialGrid& g, std::vector<bool> mask)
        : grid_(g), mask_(std::move(mask)) {
        if (mask_.size() != grid_.size())
            throw std::invalid_argument("IndicatorSet: mask size != grid size");
    }

    const SpatialGrid& grid() const { return grid_; }
    const std::vector<bool>& mask() const { return mask_; }
    bool contains(std::size_t i) const { return mask_[i]; }
    void set(std::size_t i, bool v) { mask_[i] = v; }

    std::size_t count() const;
    double measure() const { return grid_.cell_volume() * static_cast<double>(count()); }

    IndicatorSet complement() const;
    bool subset_of(const IndicatorSet& other) const;

    /// Centered axis-aligned box {|z_a - c_a| <= half_width_a}.
    static IndicatorSet box(const SpatialGrid& g, const std::vector<double>& center,
                            const std::vector<double>& half_width);
    /// Euclidean ball of given radius about a center.
    static IndicatorSet ball(const SpatialGrid& g, const std::vector<double>& center,
                             double radius);
    static IndicatorSet empty(const SpatialGrid& g) { return IndicatorSet(g); }
    static IndicatorSet whole(const SpatialGrid& g) {
        return IndicatorSet(g, std::vector<bool>(g.size(), true));
    }

private:
    SpatialGrid grid_;
    std::vector<bool> mask_;
};

} // namespace heisenfft
