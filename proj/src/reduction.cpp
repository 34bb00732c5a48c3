#include "heisenfft/reduction.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdio>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "heisenfft/operators.hpp"
#include "heisenfft/parallel.hpp"
#include "heisenfft/propagator.hpp"

namespace heisenfft {

namespace {
constexpr double kPi = std::numbers::pi;

double lens_factor(double lambda, double s) {
    const double ls = std::abs(lambda) * s;
    return 1.0 + ls * ls;
}

void check_lens_domain(double lambda, double s) {
    const double al = std::abs(lambda);
    if (!(al > 0.0) || !(al < kPi / 2.0))
        throw std::invalid_argument("lens_transform: requires 0 < |lambda| < pi/2");
    const double s_max = std::tan(al) / al;
    if (s < -1e-12 || s > s_max * (1.0 + 1e-12))
        throw std::domain_error("lens_transform: s outside [0, tan(|lambda|)/|lambda|]");
}

} // namespace

AnalyticField rotate_frame(const AnalyticField& f, double lambda, double s, Direction dir) {
    const unsigned n = f.dim() / 2;
    const double t = (dir == Direction::Forward ? 1.0 : -1.0) * s * lambda;
    return affine_pushforward(f, AffineMap::phase_rotation(n, t));
}

namespace {

// cubic convolution kernel (Keys, a = -1/2)
double cubic_w(double x) {
    x = std::abs(x);
    if (x < 1.0) return 1.5 * x * x * x - 2.5 * x * x + 1.0;
    if (x < 2.0) return -0.5 * x * x * x + 2.5 * x * x - 4.0 * x + 2.0;
    return 0.0;
}

cplx bicubic_periodic(const Slice2N& f, double x, double y) {
    const SpatialGrid& g = f.grid;
    const unsigned N = g.points_per_axis();
    const double h = g.spacing(), L = g.extent();
    const double fx = (x + L) / h, fy = (y + L) / h;
    const long ix = static_cast<long>(std::floor(fx));
    const long iy = static_cast<long>(std::floor(fy));
    cplx acc(0.0);
    for (long a = -1; a <= 2; ++a) {
        const double wx = cubic_w(fx - (ix + a));
        if (wx == 0.0) continue;
        const unsigned ka = static_cast<unsigned>(((ix + a) % N + N) % N);
        for (long b = -1; b <= 2; ++b) {
            const double wy = cubic_w(fy - (iy + b));
            if (wy == 0.0) continue;
            const unsigned kb = static_cast<unsigned>(((iy + b) % N + N) % N);
            acc += wx * wy * f.values[static_cast<std::size_t>(ka) * N + kb];
        }
    }
    return acc;
}

} // namespace

Slice2N rotate_frame(const Slice2N& f, double lambda, double s, Direction dir,
                     double* max_interp_error) {
    if (f.grid.n() != 1)
        throw std::invalid_argument(
            "rotate_frame: sampled path implemented for n = 1 (use the analytic path)");
    const double t = (dir == Direction::Forward ? 1.0 : -1.0) * s * lambda;
    const double c = std::cos(t), sn = std::sin(t);
    const unsigned N = f.grid.points_per_axis();

    Slice2N out(f.grid);
    parallel_for(N, [&](std::size_t rb, std::size_t re) {
        for (std::size_t i = rb; i < re; ++i) {
            const double x = f.grid.coord(static_cast<unsigned>(i));
            for (unsigned j = 0; j < N; ++j) {
                const double y = f.grid.coord(j);
                // e^{-t J} (x, y) = (c x - s y, s x + c y)
                out.values[i * N + j] = bicubic_periodic(f, c * x - sn * y, sn * x + c * y);
            }
        }
    });

    if (max_interp_error) {
        // round-trip error as the reported interpolation-error proxy
        Slice2N back(f.grid);
        parallel_for(N, [&](std::size_t rb, std::size_t re) {
            for (std::size_t i = rb; i < re; ++i) {
                const double x = f.grid.coord(static_cast<unsigned>(i));
                for (unsigned j = 0; j < N; ++j) {
                    const double y = f.grid.coord(j);
                    back.values[i * N + j] =
                        bicubic_periodic(out, c * x + sn * y, -sn * x + c * y);
                }
            }
        });
        double worst = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < f.values.size(); ++i) {
            worst = std::max(worst, std::abs(back.values[i] - f.values[i]));
            scale = std::max(scale, std::abs(f.values[i]));
        }
        *max_interp_error = scale > 0.0 ? worst / scale : 0.0;
    }
    return out;
}

AnalyticField lens_transform(const AnalyticField& v_at_time, double lambda,
                             double s_euclidean, Direction dir, double* hermite_time) {
    check_lens_domain(lambda, s_euclidean);
    const unsigned dim = v_at_time.dim();
    const unsigned n = dim / 2;
    const double al = std::abs(lambda);
    const double fac = lens_factor(lambda, s_euclidean);
    if (hermite_time) *hermite_time = std::atan(al * s_euclidean) / al;

    if (dir == Direction::Forward) {
        AnalyticField scaled_field =
            affine_pushforward(v_at_time, AffineMap::scaling(dim, 1.0 / std::sqrt(fac)));
        const double chirp_c = s_euclidean * al * al / (4.0 * fac);
        return (scaled_field * AnalyticField::chirp(dim, chirp_c))
            .scaled(cplx(std::pow(fac, -0.5 * n)));
    }
    // inverse: v(z') = fac^{n/2} e^{-i (s |l|^2/4) |z'|^2} w(sqrt(fac) z')
    AnalyticField scaled_field =
        affine_pushforward(v_at_time, AffineMap::scaling(dim, std::sqrt(fac)));
    const double chirp_c = -s_euclidean * al * al / 4.0;
    return (scaled_field * AnalyticField::chirp(dim, chirp_c))
        .scaled(cplx(std::pow(fac, 0.5 * n)));
}

PotentialSpec PotentialSpec::zero(unsigned dim) {
    PotentialSpec p;
    p.dim = dim;
    p.sup_norm = 0.0;
    p.at_time = [dim](double) { return AnalyticField::constant(dim, cplx(0.0)); };
    return p;
}

PotentialSpec map_potential(const PotentialSpec& V, double lambda, PotentialStage stage) {
    PotentialSpec out;
    out.dim = V.dim;
    const unsigned n = V.dim / 2;
    if (stage == PotentialStage::Tilde) {
        out.sup_norm = V.sup_norm;   // rotation preserves the sup norm
        auto base = V.at_time;
        out.at_time = [base, lambda, n](double s) {
            return affine_pushforward(base(s), AffineMap::phase_rotation(n, s * lambda));
        };
        return out;
    }
    const double al = std::abs(lambda);
    if (!(al > 0.0) || !(al < kPi / 2.0))
        throw std::invalid_argument("map_potential: stage W requires 0 < |lambda| < pi/2");
    out.sup_norm = V.sup_norm;       // (1+|l|^2 s^2)^{-1} <= 1
    auto base = V.at_time;           // input is the tilde-stage potential
    const unsigned dim = V.dim;
    out.at_time = [base, al, dim](double s) {
        const double fac = 1.0 + al * al * s * s;
        const double tau = std::atan(al * s) / al;
        return affine_pushforward(base(tau), AffineMap::scaling(dim, 1.0 / std::sqrt(fac)))
            .scaled(cplx(1.0 / fac));
    };
    return out;
}

ChainConfig::ChainConfig(double lambda_, double a3_) : lambda(lambda_), a3(a3_) {
    if (!(std::abs(lambda) > 0.0) || !(std::abs(lambda) < kPi / 2.0))
        throw std::invalid_argument("ChainConfig: requires 0 < |lambda| < pi/2");
}

double ChainConfig::a4() const { return a3 / std::cos(std::abs(lambda)); }

// ---------------------------------------------------------------- Euclidean

Slice2N euclidean_propagate(const Slice2N& u0, double s) {
    const SpatialGrid& g = u0.grid;
    const unsigned N = g.points_per_axis();
    const unsigned rank = g.axes();
    std::vector<cplx> work = u0.values;

    static std::mutex planner;
    fftw_plan fwd, bwd;
    {
        std::lock_guard<std::mutex> lock(planner);
        std::vector<int> dims(rank, static_cast<int>(N));
        auto* p = reinterpret_cast<fftw_complex*>(work.data());
        fwd = fftw_plan_dft(static_cast<int>(rank), dims.data(), p, p, FFTW_FORWARD,
                            FFTW_ESTIMATE);
        bwd = fftw_plan_dft(static_cast<int>(rank), dims.data(), p, p, FFTW_BACKWARD,
                            FFTW_ESTIMATE);
    }
    fftw_execute(fwd);

    const double dxi = kPi / g.extent();   // frequency spacing 2pi/(N h)
    unsigned ka[4];
    for (std::size_t i = 0; i < work.size(); ++i) {
        g.unflatten(i, ka);
        double xi2 = 0.0;
        for (unsigned a = 0; a < rank; ++a) {
            const int m = static_cast<int>(ka[a]);
            const int mc = (m <= static_cast<int>(N) / 2 - 1) ? m : m - static_cast<int>(N);
            const double xi = dxi * mc;
            xi2 += xi * xi;
        }
        work[i] *= std::exp(cplx(0.0, -s * xi2));
    }
    fftw_execute(bwd);
    {
        std::lock_guard<std::mutex> lock(planner);
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
    }
    const double scale = 1.0 / static_cast<double>(u0.values.size());
    for (auto& v : work) v *= scale;
    return Slice2N(g, std::move(work));
}

// -------------------------------------------------------------- chain_verify

namespace {

std::vector<double> rotated_grid_points(const SpatialGrid& g, double angle, double scale) {
    // points e^{-angle J} (z / scale) for every grid z
    const double c = std::cos(angle), sn = std::sin(angle);
    std::vector<double> pts(g.size() * 2);
    double p[4];
    for (std::size_t i = 0; i < g.size(); ++i) {
        g.point(i, p);
        const double x = p[0] / scale, y = p[1] / scale;
        pts[2 * i] = c * x - sn * y;
        pts[2 * i + 1] = sn * x + c * y;
    }
    return pts;
}

Slice2N multiply_halfstep(const Slice2N& u, const Slice2N& vpot, double dt) {
    Slice2N out = u;
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] *= std::exp(cplx(0.0, 0.5 * dt) * vpot.values[i]);
    return out;
}

// order-2 Strang step with the exact twisted kinetic flow
Slice2N strang_step(const Slice2N& u, double s_mid, double dt, double lambda,
                    const PotentialSpec& V) {
    Slice2N pot = sample(V.at_time(s_mid), u.grid);
    Slice2N half = multiply_halfstep(u, pot, dt);
    Slice2N kin = propagate_slice_factored(half, lambda, dt);
    return multiply_halfstep(kin, pot, dt);
}

Slice2N integrate_to(const Slice2N& u0, double lambda, const PotentialSpec& V,
                     double target, double strang_dt) {
    Slice2N u = u0;
    double s = 0.0;
    while (s < target - 1e-13) {
        const double step = std::min(strang_dt, target - s);
        u = strang_step(u, s + 0.5 * step, step, lambda, V);
        s += step;
    }
    return u;
}

} // namespace

ChainReport chain_verify(const AnalyticField& u0, double lambda,
                         const ChainVerifyOptions& opts) {
    if (!(lambda > 0.0) || !(lambda < kPi / 2.0))
        throw std::invalid_argument("chain_verify: requires 0 < lambda < pi/2");
    if (u0.dim() != 2)
        throw std::invalid_argument("chain_verify: implemented for n = 1 slice data");
    const double tau = opts.tau, dt = opts.dt;
    if (!(tau > dt))
        throw std::invalid_argument("chain_verify: need tau > dt");

    // n=1 grid; L from options
    const SpatialGrid grid(1, opts.L, opts.N);
    Slice2N u0s = sample(u0, grid);
    ChainReport rep;
    rep.u_norm = std::sqrt(norm_sq(u0s));

    const bool with_potential = opts.potential.has_value();
    const PotentialSpec V =
        with_potential ? *opts.potential : PotentialSpec::zero(2);
    const PotentialSpec Vt = map_potential(V, lambda, PotentialStage::Tilde);
    const PotentialSpec Vw = map_potential(Vt, lambda, PotentialStage::W);

    // slice field at requested time, evaluated at arbitrary points
    auto u_at = [&](double s, const std::vector<double>& pts) -> std::vector<cplx> {
        if (!with_potential) return propagate_slice_at_points(u0s, lambda, s, pts);
        // integrate on the grid, then read off-grid values by bicubic interpolation
        Slice2N u = integrate_to(u0s, lambda, V, s, opts.strang_dt);
        std::vector<cplx> out(pts.size() / 2);
        for (std::size_t k = 0; k < out.size(); ++k)
            out[k] = bicubic_periodic(u, pts[2 * k], pts[2 * k + 1]);
        return out;
    };

    const auto grid_pts = rotated_grid_points(grid, 0.0, 1.0);

    // --- R1: magnetic/twisted equation on the u^lambda path
    {
        std::vector<Slice2N> path;
        for (int k = -1; k <= 1; ++k) {
            auto vals = u_at(tau + k * dt, grid_pts);
            path.emplace_back(grid, std::move(vals));
        }
        const OperatorSpec op(OperatorKind::Twisted, lambda, 1, opts.stencil_order);
        std::optional<Slice2N> pot;
        if (with_potential) pot = sample(V.at_time(tau), grid);
        rep.residual_magnetic =
            pde_residual(path, op, with_potential ? &*pot : nullptr, dt);
    }

    // --- R2: Hermite equation on v(z,s) = u^lambda(e^{-s lambda J} z, s)
    {
        std::vector<Slice2N> path;
        for (int k = -1; k <= 1; ++k) {
            const double s = tau + k * dt;
            auto pts = rotated_grid_points(grid, s * lambda, 1.0);
            path.emplace_back(grid, u_at(s, pts));
        }
        const OperatorSpec op(OperatorKind::Hermite, lambda, 1, opts.stencil_order);
        std::optional<Slice2N> pot;
        if (with_potential) pot = sample(Vt.at_time(tau), grid);
        rep.residual_hermite =
            pde_residual(path, op, with_potential ? &*pot : nullptr, dt);
    }

    // --- R3: free equation on the lensed field w
    const double al = lambda;
    const double se0 = std::tan(al * tau) / al;
    auto w_field = [&](double se) -> Slice2N {
        const double fac = 1.0 + al * al * se * se;
        const double tau_h = std::atan(al * se) / al;
        auto pts = rotated_grid_points(grid, tau_h * lambda, std::sqrt(fac));
        auto vals = u_at(tau_h, pts);
        Slice2N out(grid);
        double p[4];
        for (std::size_t i = 0; i < grid.size(); ++i) {
            grid.point(i, p);
            const double r2 = p[0] * p[0] + p[1] * p[1];
            out.values[i] = std::exp(cplx(0.0, se * r2 * al * al / (4.0 * fac))) /
                            std::sqrt(fac) * vals[i];   // n = 1: (1+l^2 s^2)^{-n/2}
        }
        return out;
    };
    {
        std::vector<Slice2N> path = {w_field(se0 - dt), w_field(se0), w_field(se0 + dt)};
        const OperatorSpec op(OperatorKind::Euclidean, 0.0, 1, opts.stencil_order);
        std::optional<Slice2N> pot;
        if (with_potential) pot = sample(Vw.at_time(se0), grid);
        rep.residual_free = pde_residual(path, op, with_potential ? &*pot : nullptr, dt);

        // --- end-to-end (free case only): w(., se0) against the Fourier
        // multiplier propagator applied to w(., 0) = u0
        if (!with_potential) {
            Slice2N ref = euclidean_propagate(u0s, se0);
            double num = 0.0, den = 0.0;
            for (std::size_t i = 0; i < grid.size(); ++i) {
                num += std::norm(path[1].values[i] - ref.values[i]);
                den += std::norm(ref.values[i]);
            }
            rep.end_to_end = std::sqrt(num / den);
        }
    }

    // --- norm drifts across the links (analytic rotation / lens identities)
    {
        AnalyticField rot = rotate_frame(u0, lambda, 1.0, Direction::Forward);
        const double n0 = norm_sq(u0s);
        const double n1 = norm_sq(sample(rot, grid));
        rep.norm_drift_rotate = std::abs(n1 - n0) / n0;
        double tau_back = 0.0;
        AnalyticField lensed = lens_transform(u0, lambda, 0.5 * se0, Direction::Forward,
                                              &tau_back);
        AnalyticField undone = lens_transform(lensed, lambda, 0.5 * se0, Direction::Inverse,
                                              nullptr);
        const double n2 = norm_sq(sample(undone, grid));
        rep.norm_drift_lens = std::abs(n2 - n0) / n0;
    }
    return rep;
}

std::string ChainReport::to_json() const {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "{\"residual_magnetic\":%.17g,\"residual_hermite\":%.17g,"
                  "\"residual_free\":%.17g,\"end_to_end\":%.17g,"
                  "\"norm_drift_rotate\":%.17g,\"norm_drift_lens\":%.17g,"
                  "\"u_norm\":%.17g}",
                  residual_magnetic, residual_hermite, residual_free, end_to_end,
                  norm_drift_rotate, norm_drift_lens, u_norm);
    return buf;
}

std::size_t support_transport_violations(const SpatialGrid& grid, double lambda,
                                         double a3) {
    if (grid.n() != 1)
        throw std::invalid_argument("support_transport_violations: n = 1 only");
    const double c = std::cos(lambda), sn = std::sin(lambda);
    const unsigned N = grid.points_per_axis();
    const double h = grid.spacing();
    std::size_t violations = 0;
    for (unsigned i = 0; i < N; ++i) {
        const double x = grid.coord(i);
        if (std::abs(x) <= a3 + h) continue;   // inside the target slab (plus one layer)
        for (unsigned j = 0; j < N; ++j) {
            const double y = grid.coord(j);
            // pullback e^{-lambda J}(x, y); v(x,y) = u(pullback)
            const double px = c * x - sn * y;
            const double py = sn * x + c * y;
            if (std::abs(c * px + sn * py) <= a3) ++violations;
        }
    }
    return violations;
}

} // namespace heisenfft
