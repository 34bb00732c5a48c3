#include "heisenfft/annihilation.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "heisenfft/central_transform.hpp"
#include "heisenfft/propagator.hpp"

namespace heisenfft {

namespace {
constexpr double kPi = std::numbers::pi;

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

// Dense factored propagator on the slice space; s = 0 yields the identity.
MatrixXcd assemble_propagator(const SpatialGrid& grid, double lambda, double s) {
    const std::size_t dim = grid.size();
    if (s == 0.0) return MatrixXcd::Identity(dim, dim);
    const unsigned n = grid.n();
    if (is_singular(lambda, s))
        throw std::invalid_argument("annihilation: singular (lambda, s)");

    const double lc = lambda_cot(lambda, s);
    const double ls = lambda_over_sin(lambda, s);
    const double a = 0.25 * lc;
    cplx c(1.0);
    for (unsigned k = 0; k < n; ++k) c *= cplx(ls, 0.0) / cplx(0.0, 1.0) / (4.0 * kPi);
    const double halfcot = 0.5 * lc, half = 0.5 * lambda;
    const double vol = grid.cell_volume();

    std::vector<double> pts(dim * grid.axes());
    std::vector<cplx> gam(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        grid.point(i, pts.data() + i * grid.axes());
        double r2 = 0.0;
        for (unsigned ax = 0; ax < grid.axes(); ++ax) {
            const double v = pts[i * grid.axes() + ax];
            r2 += v * v;
        }
        gam[i] = std::exp(cplx(0.0, a * r2));
    }

    MatrixXcd U(dim, dim);
    for (std::size_t zi = 0; zi < dim; ++zi) {
        const double* z = pts.data() + zi * grid.axes();
        double jz[4];
        for (unsigned j = 0; j < n; ++j) {
            jz[j] = halfcot * z[j] + half * z[n + j];
            jz[n + j] = halfcot * z[n + j] - half * z[j];
        }
        for (std::size_t wi = 0; wi < dim; ++wi) {
            const double* w = pts.data() + wi * grid.axes();
            double dot = 0.0;
            for (unsigned ax = 0; ax < grid.axes(); ++ax) dot += jz[ax] * w[ax];
            U(zi, wi) = c * vol * gam[zi] * gam[wi] * std::exp(cplx(0.0, -dot));
        }
    }
    return U;
}

// Rows of branch restricted to the complement of the set.
MatrixXcd restrict_rows(const MatrixXcd& branch, const IndicatorSet& set) {
    const auto& mask = set.mask();
    std::size_t rows = 0;
    for (std::size_t i = 0; i < mask.size(); ++i)
        if (!mask[i]) ++rows;
    MatrixXcd out(rows, branch.cols());
    std::size_t r = 0;
    for (std::size_t i = 0; i < mask.size(); ++i)
        if (!mask[i]) out.row(r++) = branch.row(i);
    return out;
}

double unitarity_defect_of(const MatrixXcd& U) {
    if (U.rows() > 1200) {
        // sampled defect on a few deterministic vectors
        double worst = 0.0;
        for (int t = 0; t < 4; ++t) {
            VectorXcd x = VectorXcd::Zero(U.cols());
            for (int i = t; i < U.cols(); i += 4) x(i) = cplx(1.0, t * 0.25);
            x.normalize();
            worst = std::max(worst, (U.adjoint() * (U * x) - x).norm());
        }
        return worst;
    }
    return (U.adjoint() * U - MatrixXcd::Identity(U.cols(), U.cols())).cwiseAbs().maxCoeff();
}

ConstantEstimate stacked_sigma_min(const MatrixXcd& B1, const MatrixXcd& B2,
                                   const MatrixXcd& U_for_defect) {
    MatrixXcd A(B1.rows() + B2.rows(), B1.cols());
    A.topRows(B1.rows()) = B1;
    A.bottomRows(B2.rows()) = B2;

    ConstantEstimate est;
    est.unitarity_defect = unitarity_defect_of(U_for_defect);
    if (A.rows() == 0) {
        est.degenerate = true;
        est.note = "both restrictions are empty";
        return est;
    }
    Eigen::JacobiSVD<MatrixXcd> svd(A);
    est.sigma_min = svd.singularValues()(svd.singularValues().size() - 1);
    if (est.sigma_min < 1e-12) {
        est.degenerate = true;
        est.note = "sigma_min below 1e-12: pair numerically annihilating-degenerate";
        return est;
    }
    est.C = 1.0 / (est.sigma_min * est.sigma_min);
    return est;
}

void check_dense_cap(const SpatialGrid& g) {
    if (g.points_per_axis() > 48)
        throw std::invalid_argument(
            "annihilation: dense path capped at N <= 48 (use the randomized estimate)");
}

} // namespace

double kappa_prime(unsigned n, double a, double s0) {
    if (!(a > 0.0) || !(s0 > 0.0))
        throw std::invalid_argument("kappa_prime: a and s0 must be positive");
    if (!(s0 * a < kPi)) throw std::domain_error("kappa_prime: requires s0 * a < pi");
    const double ratio = a / std::sin(s0 * a);
    double out = 1.0;
    for (unsigned k = 0; k < n; ++k) out *= 2.0 * ratio * ratio;
    return out;
}

PairReport dynamical_pair_report(const HeisenbergSample& u0, const IndicatorSet& S,
                                 const IndicatorSet& Sigma, double s0,
                                 double calibrated_kappa, double band_limit) {
    if (S.grid() != u0.grid || Sigma.grid() != u0.grid)
        throw std::invalid_argument("dynamical_pair_report: grid mismatch");
    PairReport rep;
    rep.lhs = norm_sq(u0);
    if (rep.lhs <= 0.0)
        throw std::invalid_argument("dynamical_pair_report: zero input");

    PropagateReport prep;
    HeisenbergSample us = propagate(u0, s0, &prep);
    rep.excluded_mass_fraction = prep.excluded_mass_fraction;

    rep.rhs_outside_S = norm_sq(u0, S.complement());
    rep.rhs_outside_Sigma = norm_sq(us, Sigma.complement());
    const double rhs = rep.rhs_outside_S + rep.rhs_outside_Sigma;
    rep.ratio = rhs > 0.0 ? rep.lhs / rhs : std::numeric_limits<double>::infinity();

    rep.measure_S = S.measure();
    rep.measure_Sigma = Sigma.measure();

    // one-cell-layer uncertainty: boundary cells of each mask
    auto boundary_cells = [](const IndicatorSet& set) {
        const SpatialGrid& g = set.grid();
        const unsigned N = g.points_per_axis();
        std::size_t count = 0;
        unsigned ka[4];
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (!set.contains(i)) continue;
            g.unflatten(i, ka);
            bool edge = false;
            for (unsigned a = 0; a < g.axes() && !edge; ++a) {
                std::size_t stride = 1;
                for (unsigned b = g.axes(); b-- > a + 1;) stride *= N;
                const std::size_t up = i + ((ka[a] + 1) % N - ka[a]) * stride;
                const std::size_t dn = i + ((ka[a] + N - 1) % N - ka[a]) * stride;
                if (!set.contains(up) || !set.contains(dn)) edge = true;
            }
            if (edge) ++count;
        }
        return static_cast<double>(count) * g.cell_volume();
    };
    rep.measure_uncertainty = boundary_cells(S) + boundary_cells(Sigma);

    if (band_limit > 0.0) {
        rep.band_limit = band_limit;
        rep.band_limited = s0 * band_limit < kPi;
        if (rep.band_limited && calibrated_kappa > 0.0) {
            const double kp = kappa_prime(u0.grid.n(), band_limit, s0);
            rep.envelope = calibrated_kappa *
                           std::exp(calibrated_kappa * kp * rep.measure_S * rep.measure_Sigma);
        }
    }
    return rep;
}

ConstantEstimate estimate_constant(const IndicatorSet& S, const IndicatorSet& Sigma,
                                   double lambda, double s) {
    if (S.grid() != Sigma.grid())
        throw std::invalid_argument("estimate_constant: grid mismatch");
    check_dense_cap(S.grid());
    const std::size_t dim = S.grid().size();
    MatrixXcd U = assemble_propagator(S.grid(), lambda, s);
    MatrixXcd B1 = restrict_rows(MatrixXcd::Identity(dim, dim), S);
    MatrixXcd B2 = restrict_rows(U, Sigma);
    return stacked_sigma_min(B1, B2, U);
}

ConstantEstimate observability_constant(const IndicatorSet& S, const IndicatorSet& Sigma,
                                        double lambda, double s1, double s2) {
    if (S.grid() != Sigma.grid())
        throw std::invalid_argument("observability_constant: grid mismatch");
    if (!(s2 > s1) || s1 < 0.0)
        throw std::invalid_argument("observability_constant: need s2 > s1 >= 0");
    const double gap = (s2 - s1) * lambda;
    const int m = static_cast<int>(std::lround(gap / kPi));
    if (m != 0 && std::abs(gap - m * kPi) < kSingTol)
        throw std::invalid_argument("observability_constant: singular time gap");
    check_dense_cap(S.grid());
    MatrixXcd U1 = assemble_propagator(S.grid(), lambda, s1);
    MatrixXcd U2 = assemble_propagator(S.grid(), lambda, s2);
    MatrixXcd B1 = restrict_rows(U1, S);
    MatrixXcd B2 = restrict_rows(U2, Sigma);
    return stacked_sigma_min(B1, B2, U2);
}

double calibrated_unitary_extent(double lambda, unsigned N) {
    if (lambda <= 0.0) throw std::invalid_argument("calibrated_unitary_extent: lambda > 0");
    return std::sqrt(kPi * static_cast<double>(N) / lambda);
}

double calibrate_kappa(const std::vector<std::pair<double, double>>& measure_and_C,
                       double kprime_free) {
    // envelope(kappa) = kappa exp(kappa * kprime_free * m) is increasing in kappa
    auto dominates = [&](double kappa) {
        for (const auto& [m, C] : measure_and_C)
            if (kappa * std::exp(kappa * kprime_free * m) < C) return false;
        return true;
    };
    double lo = 1e-9, hi = 1.0;
    while (!dominates(hi)) {
        hi *= 2.0;
        if (hi > 1e12) return hi;
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (dominates(mid) ? hi : lo) = mid;
    }
    return hi;
}

SigmaMinEstimate randomized_sigma_min(const IndicatorSet& S, const IndicatorSet& Sigma,
                                      double lambda, double s, unsigned iterations,
                                      std::uint64_t seed) {
    const SpatialGrid& grid = S.grid();
    if (Sigma.grid() != grid)
        throw std::invalid_argument("randomized_sigma_min: grid mismatch");
    const std::size_t dim = grid.size();

    // B = A*A with A = [restrict_{S^c} ; restrict_{Sigma^c} U]; the adjoint of
    // the factored propagator equals its factorization inverse exactly
    // ((2pi)^{-2n} det J / |c|^2 = 1).
    auto matvec = [&](const VectorXcd& x, VectorXcd& y) {
        Slice2N f(grid);
        for (std::size_t i = 0; i < dim; ++i) f.values[i] = x(i);
        Slice2N uf = (s == 0.0) ? f : propagate_slice_factored(f, lambda, s);
        for (std::size_t i = 0; i < dim; ++i)
            if (Sigma.contains(i)) uf.values[i] = cplx(0.0);
        Slice2N back = (s == 0.0) ? uf : propagate_slice_factored_inverse(uf, lambda, s);
        y.resize(dim);
        for (std::size_t i = 0; i < dim; ++i)
            y(i) = back.values[i] + (S.contains(i) ? cplx(0.0) : x(i));
    };

    // Lanczos with full reorthogonalization
    const unsigned m = std::min<unsigned>(iterations, static_cast<unsigned>(dim));
    std::vector<VectorXcd> V;
    std::vector<double> alpha, beta;
    std::mt19937_64 rng(seed);
    VectorXcd v(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        const double a = 2.0 * (rng() / static_cast<double>(std::mt19937_64::max())) - 1.0;
        const double b = 2.0 * (rng() / static_cast<double>(std::mt19937_64::max())) - 1.0;
        v(i) = cplx(a, b);
    }
    v.normalize();
    V.push_back(v);
    VectorXcd w(dim);
    double beta_last = 0.0;
    for (unsigned k = 0; k < m; ++k) {
        matvec(V[k], w);
        const double a = w.dot(V[k]).real();
        alpha.push_back(a);
        w -= a * V[k];
        if (k > 0) w -= beta[k - 1] * V[k - 1];
        for (const auto& q : V) w -= q.dot(w) * q;   // full reorth
        const double b = w.norm();
        beta_last = b;
        if (b < 1e-14 || k + 1 == m) break;
        beta.push_back(b);
        V.push_back(w / b);
    }

    const unsigned kk = static_cast<unsigned>(alpha.size());
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(kk, kk);
    for (unsigned i = 0; i < kk; ++i) {
        T(i, i) = alpha[i];
        if (i + 1 < kk) T(i, i + 1) = T(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    Eigen::Index mi;
    es.eigenvalues().minCoeff(&mi);
    const double theta = es.eigenvalues()(mi);
    // residual certificate: |beta_k| * |last component of the Ritz vector|
    const double res = beta_last * std::abs(es.eigenvectors()(kk - 1, mi));

    SigmaMinEstimate out;
    out.sigma_min_sq_upper = theta;
    out.bracket_halfwidth = res;
    out.iterations = kk;
    return out;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "measure_S,measure_Sigma,lambda,s,sigma_min,C_est,envelope\r\n";
    char buf[256];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\r\n",
                      r.measure_S, r.measure_Sigma, r.lambda, r.s, r.sigma_min, r.C_est,
                      r.envelope);
        out += buf;
    }
    return out;
}

} // namespace heisenfft
