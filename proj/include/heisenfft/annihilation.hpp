#pragma once

#include <optional>
#include <string>
#include <vector>

#include "heisenfft/field.hpp"
#include "heisenfft/indicator_set.hpp"

namespace heisenfft {

/// Restricted-norm report for a dynamical pair (u0, u(.,s0)).
struct PairReport {
    double lhs = 0.0;                // ||u0||^2
    double rhs_outside_S = 0.0;      // ||u0||^2 restricted outside S
    double rhs_outside_Sigma = 0.0;  // ||u(.,s0)||^2 restricted outside Sigma
    double ratio = 0.0;              // lhs / (rhs_outside_S + rhs_outside_Sigma)
    double measure_S = 0.0;
    double measure_Sigma = 0.0;
    /// One-cell-layer uncertainty of the measures (boundary cells).
    double measure_uncertainty = 0.0;
    /// kappa e^{kappa' |S||Sigma|} with the calibrated kappa (0 if not set).
    double envelope = 0.0;
    bool band_limited = false;
    double band_limit = 0.0;
    double excluded_mass_fraction = 0.0;
};

/// kappa-free band-limited factor 2^n a^{2n} / sin^{2n}(s0 a).
/// Requires s0 * a < pi.
double kappa_prime(unsigned n, double a, double s0);

/// Propagates u0 to s0 and evaluates the aggregated restricted norms over
/// (z, t).  Throws on zero input or grid mismatch.
PairReport dynamical_pair_report(const HeisenbergSample& u0, const IndicatorSet& S,
                                 const IndicatorSet& Sigma, double s0,
                                 double calibrated_kappa = 0.0,
                                 double band_limit = 0.0);

struct ConstantEstimate {
    double sigma_min = 0.0;
    /// C = 1/sigma_min^2; infinite (unset) when sigma_min < 1e-12.
    std::optional<double> C;
    /// Worst-case |U*U - I| column sum, a measure of how far the assembled
    /// propagator is from unitary on this grid.
    double unitarity_defect = 0.0;
    bool degenerate = false;
    std::string note;
};

/// Assembles f -> (restrict_{S^c} f, restrict_{Sigma^c} U_{lambda,s} f) on the
/// N^{2n}-dimensional slice space (U = factored propagator as a dense matrix;
/// s = 0 gives the identity) and returns C = 1/sigma_min^2 of the stacked map.
/// Dense SVD path requires N <= 48.
ConstantEstimate estimate_constant(const IndicatorSet& S, const IndicatorSet& Sigma,
                                   double lambda, double s);

/// Two-time variant: f -> (restrict_{S^c} U_{s1} f, restrict_{Sigma^c} U_{s2} f),
/// s2 > s1 >= 0 and (s2-s1) lambda not within kSingTol of pi N.
ConstantEstimate observability_constant(const IndicatorSet& S, const IndicatorSet& Sigma,
                                        double lambda, double s1, double s2);

/// Randomized smallest-singular-value estimate for grids too large for the
/// dense path: Lanczos on the normal matrix with a residual certificate.
/// Returns (estimate, certified half-width): some eigenvalue of A*A lies
/// within the bracket, and estimate is always an upper bound for sigma_min^2.
struct SigmaMinEstimate {
    double sigma_min_sq_upper = 0.0;
    double bracket_halfwidth = 0.0;
    unsigned iterations = 0;
};

SigmaMinEstimate randomized_sigma_min(const IndicatorSet& S, const IndicatorSet& Sigma,
                                      double lambda, double s, unsigned iterations = 60,
                                      std::uint64_t seed = 1);

/// A grid on which the assembled factored propagator is unitary to roundoff:
/// lambda s = pi/2 and lambda L^2 = pi N.  Returns the extent L.
double calibrated_unitary_extent(double lambda, unsigned N);

/// Smallest kappa with kappa * exp(kappa * kprime_free * m) >= C for every
/// (m = |S||Sigma| * detfactor, C) pair in the sweep; bisection, monotone in kappa.
double calibrate_kappa(const std::vector<std::pair<double, double>>& measure_and_C,
                       double kprime_free);

struct SweepRow {
    double measure_S, measure_Sigma, lambda, s, sigma_min, C_est, envelope;
};

/// One row per configuration: |S|, |Sigma|, lambda, s, sigma_min, C_est, envelope.
std::string sweep_csv(const std::vector<SweepRow>& rows);

} // namespace heisenfft
