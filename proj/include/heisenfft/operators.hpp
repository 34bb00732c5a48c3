#pragma once

#include <optional>
#include <vector>

#include "heisenfft/analytic_field.hpp"
#include "heisenfft/field.hpp"

namespace heisenfft {

enum class OperatorKind {
    SubLaplacian,    // L = sum_j X_j^2 + Y_j^2                      (needs t axis)
    VectorFieldX,    // X_j = d_{x_j} + (y_j/2) d_t                  (needs t axis)
    VectorFieldY,    // Y_j = d_{y_j} - (x_j/2) d_t                  (needs t axis)
    CentralT,        // d_t                                          (needs t axis)
    Twisted,         // L_lambda = Lap - (lambda^2/4)|z|^2 + i lambda sum (x_j d_{y_j} - y_j d_{x_j})
    Magnetic,        // (grad - i C_lambda)^2, C_lambda = (lambda/2) J (x,y)
    Hermite,         // Lap - (|lambda|^2/4)(|x|^2 + |y|^2)
    Euclidean,       // Lap on R^{2n}
};

/// Discrete differential operator: periodic centered stencils of the given
/// order; second derivatives are compositions of first-derivative stencils so
/// that operator identities (e.g. sum X_j^2 + Y_j^2 against the expanded
/// display) hold to roundoff rather than to truncation order.
struct OperatorSpec {
    OperatorKind kind;
    double lambda = 0.0;   // Twisted / Magnetic / Hermite
    unsigned j = 1;        // 1-based axis index for vector fields
    unsigned order = 4;    // 2 or 4

    OperatorSpec(OperatorKind k, double lam = 0.0, unsigned j_ = 1, unsigned ord = 4);
};

Slice2N apply(const OperatorSpec& op, const Slice2N& f);
HeisenbergSample apply(const OperatorSpec& op, const HeisenbergSample& f);

/// Sub-Laplacian via the expanded display
///   Lap + (|z|^2/4) d_t^2 - sum_j (x_j d_{y_j} - y_j d_{x_j}) d_t,
/// built from the same composed stencils; agrees with apply(SubLaplacian,.)
/// to roundoff.
HeisenbergSample apply_sublaplacian_expanded(const HeisenbergSample& f, unsigned order = 4);

struct ResidualOptions {
    /// Number of t-cells excluded at each end of the central axis when the
    /// field is a HeisenbergSample (the periodic stencil straddles the wrap
    /// seam of non-periodic data there).  0 keeps the full norm.
    unsigned t_margin = 0;
};

/// max over interior times of ||i (u_{k+1}-u_{k-1})/(2 dt) + op u_k + V u_k|| / ||u_k||.
/// Requires >= 3 samples at uniform dt; returns 0 for identically zero paths.
double pde_residual(const std::vector<Slice2N>& u_path, const OperatorSpec& op,
                    const Slice2N* potential, double dt);
double pde_residual(const std::vector<HeisenbergSample>& u_path, const OperatorSpec& op,
                    const Slice2N* potential, double dt,
                    const ResidualOptions& opts = {});

} // namespace heisenfft
