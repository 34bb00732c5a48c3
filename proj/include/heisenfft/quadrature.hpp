#pragma once

#include <cstddef>
#include <vector>

namespace heisenfft {

/// Gauss-Legendre nodes and weights on [a, b].
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;

    GaussLegendre(std::size_t m, double a, double b);
};

} // namespace heisenfft
