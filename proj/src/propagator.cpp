#include "heisenfft/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "heisenfft/parallel.hpp"

namespace heisenfft {

namespace {
constexpr double kPi = std::numbers::pi;

// Turns -0 etc. into exact comparisons below.
int nearest_pi_multiple(double x) { return static_cast<int>(std::lround(x / kPi)); }
} // namespace

double lambda_cot(double lambda, double s) {
    const double x = lambda * s;
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        // x cot x = 1 - x^2/3 - x^4/45 - 2 x^6/945
        return (1.0 - x2 / 3.0 - x2 * x2 / 45.0 - 2.0 * x2 * x2 * x2 / 945.0) / s;
    }
    return lambda / std::tan(x);
}

double lambda_over_sin(double lambda, double s) {
    const double x = lambda * s;
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        // x / sin x = 1 + x^2/6 + 7 x^4/360 + 31 x^6/15120
        return (1.0 + x2 / 6.0 + 7.0 * x2 * x2 / 360.0 + 31.0 * x2 * x2 * x2 / 15120.0) / s;
    }
    return lambda / std::sin(x);
}

bool is_singular(double lambda, double s, double tol) {
    const double x = lambda * s;
    const int m = nearest_pi_multiple(x);
    if (m == 0) return false;   // removable at x = 0
    return std::abs(x - m * kPi) < tol;
}

KernelParams::KernelParams(double lambda_, double s_, unsigned n_)
    : lambda(lambda_), s(s_), n(n_) {
    if (s <= 0.0) throw std::invalid_argument("KernelParams: s must be positive");
    if (n == 0 || n > 2) throw std::invalid_argument("KernelParams: n must be 1 or 2");
    if (is_singular(lambda, s))
        throw std::invalid_argument("KernelParams: lambda*s within sing_tol of pi*Z");
}

cplx KernelParams::prefactor() const {
    const double ls = lambda_over_sin(lambda, s);
    cplx c(1.0);
    const cplx unit = cplx(ls, 0.0) / cplx(0.0, 1.0);
    for (unsigned k = 0; k < n; ++k) c *= unit / (4.0 * kPi);
    return c;
}

double KernelParams::chirp_coeff() const { return 0.25 * lambda_cot(lambda, s); }

cplx kernel_eval(const KernelParams& p, const double* z) {
    double r2 = 0.0;
    for (unsigned a = 0; a < 2 * p.n; ++a) r2 += z[a] * z[a];
    return p.prefactor() * std::exp(cplx(0.0, p.chirp_coeff() * r2));
}

cplx kernel_eval(const KernelParams& p, const std::vector<double>& z) {
    if (z.size() != 2 * p.n)
        throw std::invalid_argument("kernel_eval: point dimension != 2n");
    return kernel_eval(p, z.data());
}

AnalyticField kernel_field(const KernelParams& p) {
    return AnalyticField::chirp(2 * p.n, p.chirp_coeff()).scaled(p.prefactor());
}

JLambdaMap::JLambdaMap(double lambda_, double s_, unsigned n_)
    : lambda(lambda_), s(s_), n(n_) {
    if (s <= 0.0) throw std::invalid_argument("JLambdaMap: s must be positive");
    if (is_singular(lambda, s))
        throw std::invalid_argument("JLambdaMap: singular (lambda, s)");
}

void JLambdaMap::apply(const double* z, double* out) const {
    const double halfcot = 0.5 * lambda_cot(lambda, s);
    const double half = 0.5 * lambda;
    // J(x, y) = (y, -x)
    for (unsigned j = 0; j < n; ++j) {
        out[j] = halfcot * z[j] + half * z[n + j];
        out[n + j] = halfcot * z[n + j] - half * z[j];
    }
}

double JLambdaMap::det() const {
    const double halfcot = 0.5 * lambda_cot(lambda, s);
    const double half = 0.5 * lambda;
    const double block = halfcot * halfcot + half * half;   // (lambda/2)^2 (cot^2+1)
    double d = 1.0;
    for (unsigned k = 0; k < n; ++k) d *= block;
    return d;
}

cplx JLambdaMap::gamma(const double* w) const {
    double r2 = 0.0;
    for (unsigned a = 0; a < 2 * n; ++a) r2 += w[a] * w[a];
    return std::exp(cplx(0.0, gamma_coeff() * r2));
}

// ------------------------------------------------------------ convolutions

Slice2N twisted_convolve(const Slice2N& f, const Slice2N& g, double lambda) {
    if (f.grid != g.grid)
        throw std::invalid_argument("twisted_convolve: grid mismatch");
    const SpatialGrid& grid = f.grid;
    const unsigned n = grid.n();
    const unsigned N = grid.points_per_axis();
    const double vol = grid.cell_volume();
    Slice2N out(grid);

    parallel_for(grid.size(), [&](std::size_t b, std::size_t e) {
        unsigned kz[4], kw[4], kd[4];
        double zp[4], wp[4];
        for (std::size_t zi = b; zi < e; ++zi) {
            grid.unflatten(zi, kz);
            grid.point(zi, zp);
            cplx acc(0.0);
            for (std::size_t wi = 0; wi < grid.size(); ++wi) {
                grid.unflatten(wi, kw);
                grid.point(wi, wp);
                std::size_t di = 0;
                for (unsigned a = 0; a < 2 * n; ++a) {
                    kd[a] = (kz[a] + N - kw[a]) % N;
                    di = di * N + kd[a];
                }
                double im = 0.0;   // Im(z.conj(w)) = sum y_j xi_j - x_j eta_j
                for (unsigned j = 0; j < n; ++j)
                    im += zp[n + j] * wp[j] - zp[j] * wp[n + j];
                acc += f.values[di] * g.values[wi] * std::exp(cplx(0.0, 0.5 * lambda * im));
            }
            out.values[zi] = vol * acc;
        }
    });
    return out;
}

Slice2N twisted_convolve(const Slice2N& f, const AnalyticField& g, double lambda) {
    if (g.dim() != f.grid.axes())
        throw std::invalid_argument("twisted_convolve: field dimension mismatch");
    const SpatialGrid& grid = f.grid;
    const unsigned n = grid.n();
    const double vol = grid.cell_volume();
    Slice2N out(grid);

    // f-localized order: out(z) = h^{2n} sum_v f(v) g(z-v) e^{-i(lambda/2) Im(z.conj(v))}
    parallel_for(grid.size(), [&](std::size_t b, std::size_t e) {
        double zp[4], vp[4], dp[4];
        for (std::size_t zi = b; zi < e; ++zi) {
            grid.point(zi, zp);
            cplx acc(0.0);
            for (std::size_t vi = 0; vi < grid.size(); ++vi) {
                grid.point(vi, vp);
                for (unsigned a = 0; a < 2 * n; ++a) dp[a] = zp[a] - vp[a];
                double im = 0.0;
                for (unsigned j = 0; j < n; ++j)
                    im += zp[n + j] * vp[j] - zp[j] * vp[n + j];
                acc += f.values[vi] * g.eval(dp) * std::exp(cplx(0.0, -0.5 * lambda * im));
            }
            out.values[zi] = vol * acc;
        }
    });
    return out;
}

Slice2N propagate_slice_direct(const Slice2N& u0, double lambda, double s) {
    const KernelParams params(lambda, s, u0.grid.n());
    return twisted_convolve(u0, kernel_field(params), lambda);
}

// ------------------------------------------------------- factored machinery

namespace {

// out_k = sum over grid w of G(w) * exp(i sign (fx_k . w)) * h^{2n}
// with per-target frequency vectors fq[k][axis].  Row-major summation order
// over w is fixed.  n = 1 takes a vectorized path.
void nonuniform_sum(const std::vector<cplx>& G, const SpatialGrid& grid,
                    const std::vector<double>& freqs, double sign,
                    std::vector<cplx>& out, bool threaded) {
    const unsigned n = grid.n();
    const unsigned N = grid.points_per_axis();
    const unsigned axes = 2 * n;
    const std::size_t K = freqs.size() / axes;
    const double vol = grid.cell_volume();
    out.assign(K, cplx(0.0));

    auto body = [&](std::size_t b, std::size_t e) {
        std::vector<cplx> row(N), col(N);
        for (std::size_t k = b; k < e; ++k) {
            const double* f = freqs.data() + k * axes;
            if (n == 1) {
                for (unsigned p = 0; p < N; ++p) {
                    const double xp = grid.coord(p);
                    row[p] = std::exp(cplx(0.0, sign * f[0] * xp));
                    col[p] = std::exp(cplx(0.0, sign * f[1] * xp));
                }
                cplx acc(0.0);
                for (unsigned p = 0; p < N; ++p) {
                    const cplx* gp = G.data() + static_cast<std::size_t>(p) * N;
                    cplx inner(0.0);
                    for (unsigned q = 0; q < N; ++q) inner += gp[q] * col[q];
                    acc += row[p] * inner;
                }
                out[k] = vol * acc;
            } else {
                // generic path: tables per axis, nested flat loop
                std::vector<cplx> tab(axes * N);
                for (unsigned a = 0; a < axes; ++a)
                    for (unsigned p = 0; p < N; ++p)
                        tab[a * N + p] = std::exp(cplx(0.0, sign * f[a] * grid.coord(p)));
                cplx acc(0.0);
                unsigned ka[4];
                for (std::size_t wi = 0; wi < grid.size(); ++wi) {
                    grid.unflatten(wi, ka);
                    cplx ph(1.0);
                    for (unsigned a = 0; a < axes; ++a) ph *= tab[a * N + ka[a]];
                    acc += G[wi] * ph;
                }
                out[k] = vol * acc;
            }
        }
    };
    if (threaded)
        parallel_for(K, body);
    else
        body(0, K);
}

struct FactoredCoeffs {
    double a;        // chirp coefficient
    cplx c;          // kernel prefactor
    double halfcot;  // J components
    double half;
    unsigned n;
};

FactoredCoeffs factored_coeffs(double lambda, double s, unsigned n) {
    if (s <= 0.0) throw std::invalid_argument("propagator: s must be positive");
    if (is_singular(lambda, s))
        throw std::invalid_argument("propagator: singular (lambda, s)");
    FactoredCoeffs fc;
    fc.n = n;
    const double lc = lambda_cot(lambda, s);
    const double ls = lambda_over_sin(lambda, s);
    fc.a = 0.25 * lc;
    cplx c(1.0);
    for (unsigned k = 0; k < n; ++k) c *= cplx(ls, 0.0) / cplx(0.0, 1.0) / (4.0 * kPi);
    fc.c = c;
    fc.halfcot = 0.5 * lc;
    fc.half = 0.5 * lambda;
    return fc;
}

std::vector<cplx> chirped_input(const Slice2N& u0, double a) {
    std::vector<cplx> G(u0.values.size());
    double p[4];
    for (std::size_t i = 0; i < G.size(); ++i) {
        u0.grid.point(i, p);
        double r2 = 0.0;
        for (unsigned ax = 0; ax < u0.grid.axes(); ++ax) r2 += p[ax] * p[ax];
        G[i] = u0.values[i] * std::exp(cplx(0.0, a * r2));
    }
    return G;
}

std::vector<cplx> factored_at_points(const Slice2N& u0, double lambda, double s,
                                     std::span<const double> points, bool threaded) {
    const unsigned n = u0.grid.n();
    const unsigned axes = 2 * n;
    if (points.size() % axes != 0)
        throw std::invalid_argument("propagator: point buffer size not a multiple of 2n");
    const std::size_t K = points.size() / axes;
    const FactoredCoeffs fc = factored_coeffs(lambda, s, n);

    std::vector<cplx> G = chirped_input(u0, fc.a);

    std::vector<double> freqs(K * axes);
    for (std::size_t k = 0; k < K; ++k) {
        const double* z = points.data() + k * axes;
        double* f = freqs.data() + k * axes;
        for (unsigned j = 0; j < n; ++j) {
            f[j] = fc.halfcot * z[j] + fc.half * z[n + j];
            f[n + j] = fc.halfcot * z[n + j] - fc.half * z[j];
        }
    }
    std::vector<cplx> sums;
    nonuniform_sum(G, u0.grid, freqs, -1.0, sums, threaded);

    std::vector<cplx> out(K);
    for (std::size_t k = 0; k < K; ++k) {
        const double* z = points.data() + k * axes;
        double r2 = 0.0;
        for (unsigned a = 0; a < axes; ++a) r2 += z[a] * z[a];
        out[k] = fc.c * std::exp(cplx(0.0, fc.a * r2)) * sums[k];
    }
    return out;
}

std::vector<double> grid_points(const SpatialGrid& grid) {
    std::vector<double> pts(grid.size() * grid.axes());
    double p[4];
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid.point(i, p);
        for (unsigned a = 0; a < grid.axes(); ++a) pts[i * grid.axes() + a] = p[a];
    }
    return pts;
}

Slice2N factored_on_grid(const Slice2N& u0, double lambda, double s, bool threaded) {
    const auto pts = grid_points(u0.grid);
    auto vals = factored_at_points(u0, lambda, s, pts, threaded);
    return Slice2N(u0.grid, std::move(vals));
}

} // namespace

Slice2N propagate_slice_factored(const Slice2N& u0, double lambda, double s) {
    return factored_on_grid(u0, lambda, s, true);
}

Slice2N propagate_slice_factored(const AnalyticField& u0, const SpatialGrid& grid,
                                 double lambda, double s) {
    return propagate_slice_factored(sample(u0, grid), lambda, s);
}

std::vector<cplx> propagate_slice_at_points(const Slice2N& u0, double lambda, double s,
                                            std::span<const double> points) {
    return factored_at_points(u0, lambda, s, points, true);
}

Slice2N propagate_slice_factored_inverse(const Slice2N& u_s, double lambda, double s) {
    const SpatialGrid& grid = u_s.grid;
    const unsigned n = grid.n();
    const unsigned axes = 2 * n;
    const FactoredCoeffs fc = factored_coeffs(lambda, s, n);
    const JLambdaMap jmap(lambda, s, n);

    // V(z) = U(z) / (c gamma(z))
    std::vector<cplx> V(u_s.values.size());
    double p[4];
    for (std::size_t i = 0; i < V.size(); ++i) {
        grid.point(i, p);
        double r2 = 0.0;
        for (unsigned a = 0; a < axes; ++a) r2 += p[a] * p[a];
        V[i] = u_s.values[i] / (fc.c * std::exp(cplx(0.0, fc.a * r2)));
    }

    // u0(w) = conj(gamma(w)) (2pi)^{-2n} |det J| h^{2n} sum_z V(z) e^{+i <J z, w>}
    // <J z, w> = z . (J^T w); reuse the nonuniform sum with J^T w frequencies.
    const auto pts = grid_points(grid);
    const std::size_t K = grid.size();
    std::vector<double> freqs(K * axes);
    for (std::size_t k = 0; k < K; ++k) {
        const double* w = pts.data() + k * axes;
        double* f = freqs.data() + k * axes;
        // J^T w: transpose of [halfcot I + half J]
        for (unsigned j = 0; j < n; ++j) {
            f[j] = fc.halfcot * w[j] - fc.half * w[n + j];
            f[n + j] = fc.halfcot * w[n + j] + fc.half * w[j];
        }
    }
    std::vector<cplx> sums;
    nonuniform_sum(V, grid, freqs, +1.0, sums, true);

    double inv2pi = 1.0;
    for (unsigned a = 0; a < axes; ++a) inv2pi /= 2.0 * kPi;
    const double scale = inv2pi * std::abs(jmap.det());
    Slice2N out(grid);
    for (std::size_t k = 0; k < K; ++k) {
        const double* w = pts.data() + k * axes;
        double r2 = 0.0;
        for (unsigned a = 0; a < axes; ++a) r2 += w[a] * w[a];
        out.values[k] = std::conj(std::exp(cplx(0.0, fc.a * r2))) * scale * sums[k];
    }
    return out;
}

// ------------------------------------------------------------- full sample

PropagateReport propagate_stack(LambdaStack& stack, double s, const PropagateOptions& opts) {
    const unsigned M = stack.axis.points();
    PropagateReport report;

    std::vector<double> mass(M);
    double total = 0.0;
    for (unsigned k = 0; k < M; ++k) {
        mass[k] = stack.slice_mass(k);
        total += mass[k];
    }
    if (total <= 0.0) return report;

    std::vector<unsigned> active;
    for (unsigned k = 0; k < M; ++k) {
        const double lam = stack.lambda(k);
        if (is_singular(lam, s)) {
            stack.excluded_mask[k] = true;
            report.excluded_indices.push_back(k);
            report.excluded_mass_fraction += mass[k] / total;
            std::fill(stack.slices[k].values.begin(), stack.slices[k].values.end(),
                      cplx(0.0));
        } else if (mass[k] / total < opts.skip_tol) {
            report.skipped_mass_fraction += mass[k] / total;
            std::fill(stack.slices[k].values.begin(), stack.slices[k].values.end(),
                      cplx(0.0));
        } else {
            active.push_back(k);
        }
    }

    // slice-level parallelism; the per-slice sum itself stays single-threaded
    // so the summation order is independent of the thread count.
    parallel_for(active.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            const unsigned k = active[i];
            stack.slices[k] = factored_on_grid(stack.slices[k], stack.lambda(k), s, false);
        }
    });
    report.propagated_slices = static_cast<unsigned>(active.size());
    return report;
}

HeisenbergSample propagate(const HeisenbergSample& u0, double s, PropagateReport* report,
                           const PropagateOptions& opts) {
    LambdaStack stack = forward_central(u0);
    PropagateReport rep = propagate_stack(stack, s, opts);
    if (report) *report = rep;
    return inverse_central(stack);
}

} // namespace heisenfft
