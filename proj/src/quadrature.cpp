#include "heisenfft/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace heisenfft {

// Nodes by Newton iteration on P_m with the standard asymptotic seed.
GaussLegendre::GaussLegendre(std::size_t m, double a, double b) {
    if (m < 2) throw std::invalid_argument("GaussLegendre: need at least 2 nodes");
    nodes.resize(m);
    weights.resize(m);
    const double pi = 3.14159265358979323846;
    for (std::size_t i = 0; i < (m + 1) / 2; ++i) {
        double x = std::cos(pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(m) + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (std::size_t k = 2; k <= m; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = m * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (std::size_t i = 0; i < m; ++i) {
        nodes[i] = mid + half * nodes[i];
        weights[i] *= half;
    }
}

} // namespace heisenfft
