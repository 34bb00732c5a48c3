#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "heisenfft/analytic_field.hpp"
#include "heisenfft/field.hpp"

namespace heisenfft {

enum class Direction { Forward, Inverse };

/// Composition with the frame rotation e^{-s lambda J} (forward) or its
/// inverse.  Analytic path is exact; the sampled path uses bicubic
/// interpolation and reports its round-trip error estimate.
AnalyticField rotate_frame(const AnalyticField& f, double lambda, double s, Direction dir);
Slice2N rotate_frame(const Slice2N& f, double lambda, double s, Direction dir,
                     double* max_interp_error = nullptr);

/// Lens transform between the Hermite-side field v and the free-side field w:
///   w(z, s) = (1+|l|^2 s^2)^{-n/2} exp(i s |z|^2 |l|^2 / (4(1+|l|^2 s^2)))
///             * v(z / sqrt(1+|l|^2 s^2), arctan(|l| s)/|l|).
/// Forward maps v(., arctan(|l|s)/|l|) to w(., s); inverse undoes the factors
/// and time map.  Requires 0 < |lambda| < pi/2 and 0 <= s <= tan(|l|)/|l|.
/// The returned field is the single-time snapshot; the associated Hermite-side
/// time is written to hermite_time when given.
AnalyticField lens_transform(const AnalyticField& v_at_time, double lambda,
                             double s_euclidean, Direction dir,
                             double* hermite_time = nullptr);

/// Time-dependent bounded potential, independent of the central variable.
struct PotentialSpec {
    /// V(., s) as a symbolic field; dim = 2n.
    std::function<AnalyticField(double s)> at_time;
    double sup_norm = 0.0;
    unsigned dim = 2;

    static PotentialSpec zero(unsigned dim);
};

enum class PotentialStage { Tilde, W };

/// Stage Tilde: V~(x,y,s) = V(e^{-s lambda J}(x,y), s)  (sup norm preserved).
/// Stage W:     W(z,s) = (1+|l|^2 s^2)^{-1} V~(z/sqrt(1+|l|^2 s^2), arctan(|l|s)/|l|)
/// (sup norm does not increase).  Stage W requires 0 < |lambda| < pi/2.
PotentialSpec map_potential(const PotentialSpec& V, double lambda, PotentialStage stage);

struct ChainConfig {
    double lambda = 1.0;       // 0 < |lambda| < pi/2
    double a0 = 1.0;           // exponential-weight rate
    double a1 = 1.0, a2 = 1.0; // support radii of the hypotheses
    double a3 = 2.0;           // derived slab radius
    double a4() const;         // sec(|lambda|) * a3

    ChainConfig() = default;
    ChainConfig(double lambda_, double a3_);
};

struct ChainReport {
    double residual_magnetic = 0.0;   // R1: i d_s u + L_lambda u (+V u) = 0
    double residual_hermite = 0.0;    // R2: rotated frame vs Hermite equation
    double residual_free = 0.0;       // R3: lensed frame vs free equation (+W)
    double end_to_end = 0.0;          // lens.rotate.propagate vs FFT free propagator
    double norm_drift_rotate = 0.0;   // | ||rot u|| - ||u|| | / ||u||  (analytic path)
    double norm_drift_lens = 0.0;
    double u_norm = 0.0;
    std::string to_json() const;
};

struct ChainVerifyOptions {
    unsigned N = 64;
    double L = 9.0;
    double tau = 0.5;        // Hermite-side verification time
    double dt = 1e-3;        // centered time-derivative step
    unsigned stencil_order = 4;
    /// Optional bounded potential; when set, the magnetic-side path is
    /// integrated with order-2 Strang splitting (exact twisted kinetic flow)
    /// and the residual tolerances are the relaxed ones.
    std::optional<PotentialSpec> potential;
    double strang_dt = 2e-3;
};

/// Runs the three per-link residuals and the end-to-end identity for initial
/// slice data u0 (analytic), fixed lambda in (0, pi/2).
ChainReport chain_verify(const AnalyticField& u0, double lambda,
                         const ChainVerifyOptions& opts);

/// Mask transport check of the rotation: data supported in
/// {|cos(l) x_1 + sin(l) y_1| <= a3} maps under e^{-s l J}, s = 1, into
/// {|x_1| <= a3}; returns the number of image cells outside the target slab
/// beyond a one-cell layer (0 = inclusion holds).
std::size_t support_transport_violations(const SpatialGrid& grid, double lambda, double a3);

/// Euclidean reference propagator e^{i s Lap} on the periodic box (Fourier
/// multiplier e^{-i |xi|^2 s}); the independent side of the end-to-end check.
Slice2N euclidean_propagate(const Slice2N& u0, double s);

} // namespace heisenfft
