#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace heisenfft {

/// Uniform periodic grid over the phase-plane box [-L, L)^{2n}.
///
/// Coordinates are reproducible bit-for-bit from (L, N): the k-th sample on
/// each axis is  x_k = -L + k*h  with  h = 2L/N.  Axis order for flattened
/// arrays is (x_1..x_n, y_1..y_n), row-major, last axis fastest.
class SpatialGrid {
public:
    SpatialGrid(unsigned n, double extent, unsigned points_per_axis)
        : n_(n), L_(extent), N_(points_per_axis) {
        if (n_ == 0 || n_ > 2)
            throw std::invalid_argument("SpatialGrid: n must be 1 or 2");
        if (L_ <= 0.0)
            throw std::invalid_argument("SpatialGrid: extent must be positive");
        if (N_ < 4 || N_ % 2 != 0)
            throw std::invalid_argument("SpatialGrid: N must be even and >= 4");
        h_ = 2.0 * L_ / static_cast<double>(N_);
    }

    unsigned n() const { return n_; }
    unsigned axes() const { return 2 * n_; }
    double extent() const { return L_; }
    unsigned points_per_axis() const { return N_; }
    double spacing() const { return h_; }

    /// Total point count N^{2n}.
    std::size_t size() const {
        std::size_t s = 1;
        for (unsigned a = 0; a < axes(); ++a) s *= N_;
        return s;
    }

    /// Cell volume h^{2n}.
    double cell_volume() const {
        double v = 1.0;
        for (unsigned a = 0; a < axes(); ++a) v *= h_;
        return v;
    }

    double coord(unsigned k) const { return -L_ + h_ * static_cast<double>(k); }

    /// Decodes a flat index into per-axis indices (size 2n).
    void unflatten(std::size_t idx, unsigned* out) const {
        for (unsigned a = axes(); a-- > 0;) {
            out[a] = static_cast<unsigned>(idx % N_);
            idx /= N_;
        }
    }

    /// Writes the 2n coordinates of grid point idx into out.
    void point(std::size_t idx, double* out) const {
        unsigned ka[4];
        unflatten(idx, ka);
        for (unsigned a = 0; a < axes(); ++a) out[a] = coord(ka[a]);
    }

    bool operator==(const SpatialGrid& o) const {
        return n_ == o.n_ && L_ == o.L_ && N_ == o.N_;
    }
    bool operator!=(const SpatialGrid& o) const { return !(*this == o); }

private:
    unsigned n_;
    double L_;
    unsigned N_;
    double h_;
};

/// Uniform periodic axis for the central variable t over [-T_len, T_len),
/// together with its discrete Fourier dual.
///
/// t_j = -T_len + j*dt, dt = 2 T_len / M.  The dual frequencies are
/// lambda_k = (pi/T_len) * (k - M/2) for k = 0..M-1 (ascending), spacing
/// pi/T_len; forward-then-inverse over this axis is the identity exactly.
class CentralAxis {
public:
    CentralAxis(double t_extent, unsigned points)
        : T_(t_extent), M_(points) {
        if (T_ <= 0.0)
            throw std::invalid_argument("CentralAxis: extent must be positive");
        if (M_ < 4 || M_ % 2 != 0)
            throw std::invalid_argument("CentralAxis: M must be even and >= 4");
    }

    double extent() const { return T_; }
    unsigned points() const { return M_; }
    double dt() const { return 2.0 * T_ / static_cast<double>(M_); }
    double dlambda() const { return 3.14159265358979323846 / T_; }

    double t(unsigned j) const { return -T_ + dt() * static_cast<double>(j); }
    /// Signed centered frequency index of slot k: k - M/2.
    int freq_index(unsigned k) const { return static_cast<int>(k) - static_cast<int>(M_) / 2; }
    double lambda(unsigned k) const { return dlambda() * static_cast<double>(freq_index(k)); }

    bool operator==(const CentralAxis& o) const { return T_ == o.T_ && M_ == o.M_; }
    bool operator!=(const CentralAxis& o) const { return !(*this == o); }

private:
    double T_;
    unsigned M_;
};

} // namespace heisenfft
