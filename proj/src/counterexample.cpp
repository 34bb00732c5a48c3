#include "heisenfft/counterexample.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "heisenfft/operators.hpp"
#include "heisenfft/parallel.hpp"

namespace heisenfft {

namespace {
constexpr double kPi = std::numbers::pi;

// bump core on tau in (-1, 1): exp(-1/(1 - tau^2)) and derivatives in tau
double bump(double tau) { return std::exp(-1.0 / (1.0 - tau * tau)); }
double bump_d1(double tau) {
    const double q = 1.0 - tau * tau;
    return bump(tau) * (-2.0 * tau / (q * q));
}
double bump_d2(double tau) {
    const double q = 1.0 - tau * tau;
    const double gp = -2.0 * tau / (q * q);
    const double gpp = -2.0 / (q * q) - 8.0 * tau * tau / (q * q * q);
    return bump(tau) * (gp * gp + gpp);
}
} // namespace

BumpProfile::BumpProfile(double alpha, std::size_t quad_nodes)
    : alpha_(alpha), quad_(quad_nodes, alpha, alpha + 1.0) {
    if (!(alpha > 0.0)) throw std::invalid_argument("BumpProfile: alpha must be positive");
}

double BumpProfile::operator()(double lambda) const {
    const double tau = 2.0 * (lambda - alpha_) - 1.0;
    if (std::abs(tau) >= 1.0) return 0.0;
    return bump(tau);
}

double BumpProfile::d1(double lambda) const {
    const double tau = 2.0 * (lambda - alpha_) - 1.0;
    if (std::abs(tau) >= 1.0) return 0.0;
    return 2.0 * bump_d1(tau);    // d/dlambda = 2 d/dtau
}

double BumpProfile::d2(double lambda) const {
    const double tau = 2.0 * (lambda - alpha_) - 1.0;
    if (std::abs(tau) >= 1.0) return 0.0;
    return 4.0 * bump_d2(tau);
}

namespace {
double quad_sum(const BumpProfile& phi, double (BumpProfile::*f)(double) const,
                bool absolute) {
    const auto& q = phi.quad();
    double acc = 0.0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
        const double v = (phi.*f)(q.nodes[i]);
        acc += q.weights[i] * (absolute ? std::abs(v) : v);
    }
    return acc;
}
} // namespace

double BumpProfile::l1_norm() const { return quad_sum(*this, &BumpProfile::operator(), true); }
double BumpProfile::l1_norm_d1() const { return quad_sum(*this, &BumpProfile::d1, true); }
double BumpProfile::l1_norm_d2() const { return quad_sum(*this, &BumpProfile::d2, true); }

double BumpProfile::l2_sq() const {
    const auto& q = quad();
    double acc = 0.0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
        const double v = (*this)(q.nodes[i]);
        acc += q.weights[i] * v * v;
    }
    return acc;
}

cplx eval_u(const BumpProfile& phi, const double* z, unsigned n, double t, double s) {
    double r2 = 0.0;
    for (unsigned a = 0; a < 2 * n; ++a) r2 += z[a] * z[a];
    const double tt = t - static_cast<double>(n) * s;
    const auto& q = phi.quad();
    cplx acc(0.0);
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
        const double lam = q.nodes[i];    // support is in (alpha, alpha+1), lam > 0
        acc += q.weights[i] * phi(lam) * std::exp(cplx(-lam * r2 / 4.0, lam * tt));
    }
    return acc;
}

HeisenbergSample sample_u(const BumpProfile& phi, const SpatialGrid& grid,
                          const CentralAxis& axis, double s) {
    HeisenbergSample out(grid, axis);
    const unsigned M = axis.points();
    const unsigned n = grid.n();
    parallel_for(grid.size(), [&](std::size_t b, std::size_t e) {
        double p[4];
        for (std::size_t zi = b; zi < e; ++zi) {
            grid.point(zi, p);
            double r2 = 0.0;
            for (unsigned a = 0; a < 2 * n; ++a) r2 += p[a] * p[a];
            const auto& q = phi.quad();
            // factor the quadrature: exp part in t separates per node
            for (unsigned j = 0; j < M; ++j) {
                const double tt = axis.t(j) - static_cast<double>(n) * s;
                cplx acc(0.0);
                for (std::size_t i = 0; i < q.nodes.size(); ++i) {
                    const double lam = q.nodes[i];
                    acc += q.weights[i] * phi(lam) *
                           std::exp(cplx(-lam * r2 / 4.0, lam * tt));
                }
                out.at(zi, j) = acc;
            }
        }
    });
    return out;
}

ResidualCheckResult residual_check(const BumpProfile& phi, const SpatialGrid& grid,
                                   const CentralAxis& axis,
                                   const std::vector<double>& s_values, unsigned n,
                                   unsigned stencil_order, unsigned t_margin) {
    if (grid.n() != n) throw std::invalid_argument("residual_check: grid n mismatch");
    if (s_values.size() < 3)
        throw std::invalid_argument("residual_check: need >= 3 time samples");
    const double dt = s_values[1] - s_values[0];
    for (std::size_t k = 1; k < s_values.size(); ++k)
        if (std::abs((s_values[k] - s_values[k - 1]) - dt) > 1e-12 * std::abs(dt))
            throw std::invalid_argument("residual_check: non-uniform s grid");

    std::vector<HeisenbergSample> path;
    path.reserve(s_values.size());
    for (double s : s_values) path.push_back(sample_u(phi, grid, axis, s));

    ResidualCheckResult res;
    {
        // boundary health of the middle sample
        const HeisenbergSample& mid = path[path.size() / 2];
        double vmax = 0.0, zb = 0.0, tb = 0.0;
        const unsigned M = axis.points(), N = grid.points_per_axis();
        unsigned ka[4];
        for (std::size_t zi = 0; zi < grid.size(); ++zi) {
            grid.unflatten(zi, ka);
            bool zedge = false;
            for (unsigned a = 0; a < grid.axes(); ++a)
                if (ka[a] == 0 || ka[a] == N - 1) zedge = true;
            for (unsigned j = 0; j < M; ++j) {
                const double v = std::abs(mid.at(zi, j));
                vmax = std::max(vmax, v);
                if (zedge) zb = std::max(zb, v);
                if (j == 0 || j == M - 1) tb = std::max(tb, v);
            }
        }
        res.z_boundary_ratio = vmax > 0 ? zb / vmax : 0.0;
        res.t_boundary_ratio = vmax > 0 ? tb / vmax : 0.0;
        res.boundary_warning = res.z_boundary_ratio > 1e-10;
    }

    const OperatorSpec op(OperatorKind::SubLaplacian, 0.0, 1, stencil_order);
    res.residual = pde_residual(path, op, nullptr, dt, {.t_margin = t_margin});
    res.residual_full = pde_residual(path, op, nullptr, dt, {.t_margin = 0});
    res.t_margin = t_margin;
    return res;
}

DecayBoundReport decay_bound_check(const BumpProfile& phi, unsigned k, unsigned n,
                                   const std::vector<DecaySamplePoint>& points) {
    if (k != 1 && k != 2)
        throw std::invalid_argument("decay_bound_check: k must be 1 or 2");
    const double dk_norm = (k == 1) ? phi.l1_norm_d1() : phi.l1_norm_d2();
    DecayBoundReport rep;
    for (const auto& pt : points) {
        double r2 = 0.0;
        for (unsigned a = 0; a < 2 * n; ++a) r2 += pt.z[a] * pt.z[a];
        const double shifted = pt.t - static_cast<double>(n) * pt.s;
        const double den2 = shifted * shifted + r2 * r2 / 16.0;
        ++rep.checked;
        if (den2 == 0.0) {
            ++rep.degenerate;     // bound is +infinity, trivially satisfied
            continue;
        }
        const double bound = dk_norm * std::exp(-phi.alpha() * r2 / 4.0) /
                             std::pow(den2, 0.5 * k);
        const double val = std::abs(eval_u(phi, pt.z, n, pt.t, pt.s));
        rep.max_ratio = std::max(rep.max_ratio, val / bound);
    }
    rep.holds = rep.max_ratio <= 1.0 + 1e-6;
    return rep;
}

namespace {

// int_R |u(z, ., s)|^2 dt = 2 pi * int phi(l)^2 e^{-l |z|^2 / 2} dl
// (1D Plancherel in t; independent of s by the shift law).
double t_integral_sq(const BumpProfile& phi, double r2) {
    const auto& q = phi.quad();
    double acc = 0.0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
        const double lam = q.nodes[i];
        const double p = phi(lam);
        acc += q.weights[i] * p * p * std::exp(-lam * r2 / 2.0);
    }
    return 2.0 * kPi * acc;
}

double pow_int(double x, unsigned e) {
    double v = 1.0;
    for (unsigned i = 0; i < e; ++i) v *= x;
    return v;
}

} // namespace

double total_mass(const BumpProfile& phi, unsigned n) {
    // int_z 2pi int phi^2 e^{-l |z|^2/2} dl dz = 2pi int phi^2 (2pi/l)^n dl
    const auto& q = phi.quad();
    double acc = 0.0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
        const double lam = q.nodes[i];
        const double p = phi(lam);
        acc += q.weights[i] * p * p * pow_int(2.0 * kPi / lam, n);
    }
    return 2.0 * kPi * acc;
}

TailMassResult tail_mass_check(const BumpProfile& phi, double r, double s, unsigned n) {
    if (!(r > 0.0)) throw std::invalid_argument("tail_mass_check: r must be positive");
    (void)s;   // the t-integrated mass is s-independent (exact shift evolution)
    TailMassResult res;
    const double alpha = phi.alpha();

    if (n == 1) {
        // z-quadrature over the complement of [-r,r]^2: four rectangles out to
        // R where the slowest mode e^{-alpha |z|^2/2} is below 1e-22 relative
        const double R = std::sqrt(r * r + 2.0 * 50.0 / alpha);
        const std::size_t m = 96;
        const GaussLegendre outer(m, r, R);
        const GaussLegendre full(m, -R, R);
        const GaussLegendre inner(m, -r, r);
        double acc = 0.0;
        auto add_rect = [&](const GaussLegendre& gx, const GaussLegendre& gy, double sx,
                            double sy) {
            for (std::size_t i = 0; i < gx.nodes.size(); ++i)
                for (std::size_t j = 0; j < gy.nodes.size(); ++j) {
                    const double x = sx * gx.nodes[i], y = sy * gy.nodes[j];
                    acc += gx.weights[i] * gy.weights[j] * t_integral_sq(phi, x * x + y * y);
                }
        };
        add_rect(outer, full, +1.0, +1.0);   // x in [r, R], y anywhere
        add_rect(outer, full, -1.0, +1.0);   // x in [-R, -r]
        add_rect(inner, outer, +1.0, +1.0);  // |x| <= r, y in [r, R]
        add_rect(inner, outer, +1.0, -1.0);  // |x| <= r, y in [-R, -r]
        res.tail_mass = acc;
    } else {
        // per-axis factorization: int_{complement} e^{-l |z|^2/2} dz
        //   = (2pi/l)^n - (sqrt(2pi/l) erf(r sqrt(l/2)))^{2n}
        const auto& q = phi.quad();
        double acc = 0.0;
        for (std::size_t i = 0; i < q.nodes.size(); ++i) {
            const double lam = q.nodes[i];
            const double p = phi(lam);
            const double axis1d = std::sqrt(2.0 * kPi / lam) * std::erf(r * std::sqrt(lam / 2.0));
            acc += q.weights[i] * p * p *
                   (pow_int(2.0 * kPi / lam, n) - pow_int(axis1d, 2 * n));
        }
        res.tail_mass = 2.0 * kPi * acc;
    }

    const double d1n = phi.l1_norm_d1();
    res.bound_printed = pow_int(2.0, 2 * (n + 1)) * kPi /
                        (pow_int(alpha, 2 * n) * pow_int(r, 2 * (n + 1))) *
                        std::exp(-static_cast<double>(n) * alpha * r * r) * d1n * d1n;

    // same chain with the complement integral taken honestly (slabs included):
    // tail <= (4pi/r^2) ||phi'||_1^2 [ (2pi/a)^n - (sqrt(2pi/a) erf(r sqrt(a/2)))^{2n} ]
    const double axis1d = std::sqrt(2.0 * kPi / alpha) * std::erf(r * std::sqrt(alpha / 2.0));
    res.bound_corrected = (4.0 * kPi / (r * r)) * d1n * d1n *
                          (pow_int(2.0 * kPi / alpha, n) - pow_int(axis1d, 2 * n));

    res.total_mass = total_mass(phi, n);
    res.within_printed = res.tail_mass <= res.bound_printed * 1.05;
    res.within_corrected = res.tail_mass <= res.bound_corrected * 1.05;
    return res;
}

double tail_mass_bruteforce(const BumpProfile& phi, double r, double s, unsigned n,
                            double z_max, double t_max, std::size_t nodes_per_axis) {
    if (n != 1)
        throw std::invalid_argument("tail_mass_bruteforce: implemented for n = 1");
    const double ns = static_cast<double>(n) * s;
    const GaussLegendre gt(2 * nodes_per_axis, ns - t_max, ns + t_max);
    const GaussLegendre outer(nodes_per_axis, r, z_max);
    const GaussLegendre full(nodes_per_axis, -z_max, z_max);
    const GaussLegendre inner(nodes_per_axis, -r, r);

    auto t_sq = [&](double x, double y) {
        double acc = 0.0;
        const double z[2] = {x, y};
        for (std::size_t k = 0; k < gt.nodes.size(); ++k) {
            const double v = std::abs(eval_u(phi, z, n, gt.nodes[k], s));
            acc += gt.weights[k] * v * v;
        }
        return acc;
    };
    double acc = 0.0;
    auto add_rect = [&](const GaussLegendre& gx, const GaussLegendre& gy, double sx,
                        double sy) {
        for (std::size_t i = 0; i < gx.nodes.size(); ++i)
            for (std::size_t j = 0; j < gy.nodes.size(); ++j)
                acc += gx.weights[i] * gy.weights[j] *
                       t_sq(sx * gx.nodes[i], sy * gy.nodes[j]);
    };
    add_rect(outer, full, +1.0, +1.0);
    add_rect(outer, full, -1.0, +1.0);
    add_rect(inner, outer, +1.0, +1.0);
    add_rect(inner, outer, +1.0, -1.0);
    return acc;
}

std::string tail_sweep_csv(const std::vector<TailSweepRow>& rows) {
    std::string out = "alpha,r,tail_mass,bound,total_mass\r\n";
    char buf[192];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\r\n", r.alpha, r.r,
                      r.tail_mass, r.bound, r.total_mass);
        out += buf;
    }
    return out;
}

std::string decay_ratio_csv(const std::vector<DecayRatioRow>& rows) {
    std::string out = "z_norm,t_minus_ns,k,ratio\r\n";
    char buf[160];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\r\n", r.z_norm,
                      r.t_minus_ns, r.k, r.ratio);
        out += buf;
    }
    return out;
}

ParsevalResult parseval_check(const BumpProfile& phi, unsigned n, const SpatialGrid& grid,
                              const CentralAxis& axis, double rel_tol) {
    ParsevalResult res;
    HeisenbergSample u0 = sample_u(phi, grid, axis, 0.0);
    res.lhs = norm_sq(u0);

    // the profile is supported in [alpha, alpha+1], alpha > 0, so phi(-l) = 0
    // for l > 0 and both candidate integrands reduce to phi(l)^2 / l^n
    const auto& q = phi.quad();
    double integral = 0.0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
        const double lam = q.nodes[i];
        const double p = phi(lam);
        integral += q.weights[i] * p * p / pow_int(lam, n);
    }
    res.rhs_A = pow_int(2.0 * kPi, n + 1) * integral;
    res.rhs_B = pow_int(2.0, n + 1) * pow_int(kPi, n - 1) * integral;
    res.rel_err_A = std::abs(res.lhs - res.rhs_A) / res.rhs_A;
    res.rel_err_B = std::abs(res.lhs - res.rhs_B) / res.rhs_B;
    const bool a_ok = res.rel_err_A <= rel_tol;
    const bool b_ok = res.rel_err_B <= rel_tol;
    res.matches = (a_ok && !b_ok) ? 'A' : (b_ok && !a_ok) ? 'B' : '?';
    return res;
}

} // namespace heisenfft
