#pragma once

#include <vector>

#include "heisenfft/field.hpp"

namespace heisenfft {

/// Stack of M lambda-slices, indexed by the ascending discrete dual values
/// lambda_k = (pi/T_len)(k - M/2) of the central axis.  excluded_mask marks
/// slices dropped by the propagator (singular lambda for the requested time).
struct LambdaStack {
    SpatialGrid grid;
    CentralAxis axis;
    std::vector<Slice2N> slices;        // size M, shared grid
    std::vector<bool> excluded_mask;    // size M, all false on construction

    LambdaStack(const SpatialGrid& g, const CentralAxis& ax);

    double lambda(unsigned k) const { return axis.lambda(k); }
    /// h^{2n} * sum |values|^2 of slice k.
    double slice_mass(unsigned k) const;
    double total_mass() const;
};

/// Partial Fourier transform in the central variable, sign convention
///   F_k(z) = dt * sum_j f(z, t_j) e^{+i lambda_k t_j}.
LambdaStack forward_central(const HeisenbergSample& f);

/// Inverse transform
///   f(z, t_j) = (1/2pi) * dlambda * sum_k F_k(z) e^{-i lambda_k t_j};
/// forward_central of the result reproduces the stack exactly.
HeisenbergSample inverse_central(const LambdaStack& stack);

} // namespace heisenfft
