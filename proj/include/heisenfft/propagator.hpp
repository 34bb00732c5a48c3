#pragma once

#include <optional>
#include <span>
#include <vector>

#include "heisenfft/analytic_field.hpp"
#include "heisenfft/central_transform.hpp"
#include "heisenfft/field.hpp"

namespace heisenfft {

/// Distance of lambda*s to the nearest nonzero multiple of pi below which a
/// slice is treated as singular (caustic of the twisted flow).
inline constexpr double kSingTol = 1e-3;

/// lambda * cot(lambda s), continued analytically through lambda s = 0.
double lambda_cot(double lambda, double s);
/// lambda / sin(lambda s), continued analytically through lambda s = 0.
double lambda_over_sin(double lambda, double s);

/// True when the propagator kernel degenerates: lambda*s within kSingTol of a
/// nonzero multiple of pi.  lambda*s near 0 is a removable singularity and is
/// not singular here.
bool is_singular(double lambda, double s, double tol = kSingTol);

/// Validated (lambda, s, n) for the explicit kernel; construction fails on
/// singular pairs and non-positive s.
struct KernelParams {
    double lambda;
    double s;
    unsigned n;

    KernelParams(double lambda, double s, unsigned n);

    /// c_{lambda,s} = (4 pi)^{-n} (lambda / (i sin(lambda s)))^n.
    cplx prefactor() const;
    /// Chirp coefficient a with kernel phase exp(i a |z|^2): a = lambda cot(lambda s)/4.
    double chirp_coeff() const;
};

/// kernel h^lambda_{is}(z) = (4pi)^{-n} (lambda/(i sin(lambda s)))^n
///                           * exp(i (lambda/4) cot(lambda s) |z|^2)
cplx kernel_eval(const KernelParams& p, const double* z);
cplx kernel_eval(const KernelParams& p, const std::vector<double>& z);

/// The kernel as a symbolic field (unit-modulus chirp times a constant).
AnalyticField kernel_field(const KernelParams& p);

/// The factorization map J_lambda = (lambda/2)(J + cot(lambda s) I_{2n}) and
/// the chirp gamma_lambda(w) = exp(i (lambda/4) cot(lambda s) |w|^2).
struct JLambdaMap {
    double lambda;
    double s;
    unsigned n;

    JLambdaMap(double lambda, double s, unsigned n);

    /// Applies J_lambda to a 2n-point.
    void apply(const double* z, double* out) const;
    /// det J_lambda = (lambda/2)^{2n} (cot^2(lambda s) + 1)^n  (by the closed formula).
    double det() const;
    /// gamma_lambda at a point (unit modulus).
    cplx gamma(const double* w) const;
    double gamma_coeff() const { return 0.25 * lambda_cot(lambda, s); }
};

/// lambda-twisted convolution
///   out(z) = h^{2n} sum_w f(z-w) g(w) e^{i (lambda/2) Im(z . conj(w))},
/// with Im(z.conj(w)) = sum_j (y_j xi_j - x_j eta_j) for z=(x,y), w=(xi,eta).
/// Sampled g: f(z-w) is wrapped periodically on the box (both factors should
/// decay at the boundary).  Analytic g: the identical sum is taken in the
/// f-localized order h^{2n} sum_v f(v) g(z-v) e^{-i(lambda/2) Im(z.conj(v))}
/// with g evaluated at the exact (unwrapped) differences, which keeps the
/// quadrature anchored to f's decay even for non-decaying g.
Slice2N twisted_convolve(const Slice2N& f, const Slice2N& g, double lambda);
Slice2N twisted_convolve(const Slice2N& f, const AnalyticField& g, double lambda);

/// Reference path: u^lambda(., s) = u0 *_lambda h^lambda_{is}.
Slice2N propagate_slice_direct(const Slice2N& u0, double lambda, double s);

/// Factored path: out(z) = c_{lambda,s} gamma(z) F[gamma u0](J_lambda z) with
/// F the Euclidean transform F[g](xi) = sum_w g(w) e^{-i<xi,w>} h^{2n},
/// evaluated at the mapped (generally off-grid) frequencies by direct
/// summation.  Summation order over w is row-major and fixed.
Slice2N propagate_slice_factored(const Slice2N& u0, double lambda, double s);
Slice2N propagate_slice_factored(const AnalyticField& u0, const SpatialGrid& grid,
                                 double lambda, double s);

/// Same factored formula evaluated at arbitrary target points (2n doubles
/// each); used by frame-changing verifications to avoid interpolation.
std::vector<cplx> propagate_slice_at_points(const Slice2N& u0, double lambda, double s,
                                            std::span<const double> points);

/// Inverse of the factorization: recovers u0 from U = propagate_slice_factored(u0)
/// via u0(w) = conj(gamma(w)) (2pi)^{-2n} |det J| sum_z [U(z)/(c gamma(z))]
///             e^{+i<J z, w>} h^{2n}.
Slice2N propagate_slice_factored_inverse(const Slice2N& u_s, double lambda, double s);

struct PropagateReport {
    /// Mass fraction of slices excluded as singular for this s.
    double excluded_mass_fraction = 0.0;
    /// Mass fraction of slices skipped as numerically empty (see skip_tol).
    double skipped_mass_fraction = 0.0;
    std::vector<unsigned> excluded_indices;
    unsigned propagated_slices = 0;
};

struct PropagateOptions {
    /// Slices whose relative squared mass falls below this are zeroed without
    /// propagation; their exact mass is accounted in skipped_mass_fraction,
    /// which bounds the introduced error.
    double skip_tol = 1e-12;
    /// Warn threshold for boundary decay of the input sample.
    double boundary_tol = 1e-10;
};

/// e^{is L} on a full sample: forward_central, per-lambda factored propagation
/// (lambda = 0 via the continuous Euclidean limit), inverse_central.  Singular
/// lambda are zeroed, marked in the stack mask, and reported.
HeisenbergSample propagate(const HeisenbergSample& u0, double s,
                           PropagateReport* report = nullptr,
                           const PropagateOptions& opts = {});

/// Per-slice variant on an existing stack (in place); returns the report.
PropagateReport propagate_stack(LambdaStack& stack, double s,
                                const PropagateOptions& opts = {});

} // namespace heisenfft
