#include "heisenfft/indicator_set.hpp"

#include <cmath>
#include <stdexcept>

namespace heisenfft {

std::size_t IndicatorSet::count() const {
    std::size_t c = 0;
    for (bool b : mask_)
        if (b) ++c;
    return c;
}

IndicatorSet IndicatorSet::complement() const {
    std::vector<bool> m(mask_.size());
    for (std::size_t i = 0; i < mask_.size(); ++i) m[i] = !mask_[i];
    return IndicatorSet(grid_, std::move(m));
}

bool IndicatorSet::subset_of(const IndicatorSet& other) const {
    if (grid_ != other.grid_) return false;
    for (std::size_t i = 0; i < mask_.size(); ++i)
        if (mask_[i] && !other.mask_[i]) return false;
    return true;
}

IndicatorSet IndicatorSet::box(const SpatialGrid& g, const std::vector<double>& center,
                               const std::vector<double>& half_width) {
    if (center.size() != g.axes() || half_width.size() != g.axes())
        throw std::invalid_argument("IndicatorSet::box: need 2n center/half-width entries");
    IndicatorSet set(g);
    double p[4];
    for (std::size_t i = 0; i < g.size(); ++i) {
        g.point(i, p);
        bool inside = true;
        for (unsigned a = 0; a < g.axes(); ++a)
            if (std::abs(p[a] - center[a]) > half_width[a]) { inside = false; break; }
        set.set(i, inside);
    }
    return set;
}

IndicatorSet IndicatorSet::ball(const SpatialGrid& g, const std::vector<double>& center,
                                double radius) {
    if (center.size() != g.axes())
        throw std::invalid_argument("IndicatorSet::ball: need 2n center entries");
    IndicatorSet set(g);
    double p[4];
    const double r2 = radius * radius;
    for (std::size_t i = 0; i < g.size(); ++i) {
        g.point(i, p);
        double d2 = 0.0;
        for (unsigned a = 0; a < g.axes(); ++a) d2 += (p[a] - center[a]) * (p[a] - center[a]);
        set.set(i, d2 <= r2);
    }
    return set;
}

} // namespace heisenfft
