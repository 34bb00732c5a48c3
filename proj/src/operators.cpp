#include "heisenfft/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace heisenfft {

namespace {

// Flat tensor view: dims/strides, last axis fastest.
struct Shape {
    unsigned naxes = 0;
    std::size_t dims[5] = {};
    std::size_t strides[5] = {};
    std::size_t size = 0;

    static Shape of(const Slice2N& f) {
        Shape s;
        s.naxes = f.grid.axes();
        for (unsigned a = 0; a < s.naxes; ++a) s.dims[a] = f.grid.points_per_axis();
        s.finish();
        return s;
    }
    static Shape of(const HeisenbergSample& f) {
        Shape s;
        s.naxes = f.grid.axes() + 1;
        for (unsigned a = 0; a + 1 < s.naxes; ++a) s.dims[a] = f.grid.points_per_axis();
        s.dims[s.naxes - 1] = f.axis.points();
        s.finish();
        return s;
    }
    void finish() {
        std::size_t st = 1;
        for (unsigned a = naxes; a-- > 0;) {
            strides[a] = st;
            st *= dims[a];
        }
        size = st;
    }
};

using Vec = std::vector<cplx>;

// Periodic centered first derivative along one axis; order 2 or 4.
Vec d1(const Vec& in, const Shape& sh, unsigned axis, double h, unsigned order) {
    Vec out(in.size());
    const std::size_t d = sh.dims[axis], st = sh.strides[axis];
    if (order == 2) {
        const double c1 = 1.0 / (2.0 * h);
        for (std::size_t i = 0; i < in.size(); ++i) {
            const std::size_t k = (i / st) % d;
            const std::size_t ip = i + ((k + 1) % d - k) * st;
            const std::size_t im = i + ((k + d - 1) % d - k) * st;
            out[i] = c1 * (in[ip] - in[im]);
        }
    } else if (order == 4) {
        const double c1 = 8.0 / (12.0 * h), c2 = 1.0 / (12.0 * h);
        for (std::size_t i = 0; i < in.size(); ++i) {
            const std::size_t k = (i / st) % d;
            const std::size_t ip1 = i + ((k + 1) % d - k) * st;
            const std::size_t im1 = i + ((k + d - 1) % d - k) * st;
            const std::size_t ip2 = i + ((k + 2) % d - k) * st;
            const std::size_t im2 = i + ((k + d - 2) % d - k) * st;
            out[i] = c1 * (in[ip1] - in[im1]) - c2 * (in[ip2] - in[im2]);
        }
    } else {
        throw std::invalid_argument("d1: stencil order must be 2 or 4");
    }
    return out;
}

// Multiplies in place by the coord of a spatial axis.
void mul_coord(Vec& v, const Shape& sh, unsigned axis, const SpatialGrid& g, double factor) {
    const std::size_t d = sh.dims[axis], st = sh.strides[axis];
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] *= factor * g.coord(static_cast<unsigned>((i / st) % d));
}

void axpy(Vec& y, const Vec& x, cplx a) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

// X_j f = d_{x_j} f + (y_j / 2) d_t f ;  Y_j f = d_{y_j} f - (x_j / 2) d_t f
Vec vector_field(const Vec& f, const Shape& sh, const SpatialGrid& g, unsigned j,
                 bool is_x, double h, double dt, unsigned order) {
    const unsigned n = g.n();
    const unsigned t_axis = sh.naxes - 1;
    const unsigned sp_axis = is_x ? (j - 1) : (n + j - 1);
    const unsigned coord_axis = is_x ? (n + j - 1) : (j - 1);
    Vec out = d1(f, sh, sp_axis, h, order);
    Vec dt_f = d1(f, sh, t_axis, dt, order);
    mul_coord(dt_f, sh, coord_axis, g, is_x ? 0.5 : -0.5);
    axpy(out, dt_f, cplx(1.0));
    return out;
}

Vec sublaplacian(const Vec& f, const Shape& sh, const SpatialGrid& g, double h, double dt,
                 unsigned order) {
    Vec acc(f.size(), cplx(0.0));
    for (unsigned j = 1; j <= g.n(); ++j) {
        Vec xf = vector_field(f, sh, g, j, true, h, dt, order);
        Vec xxf = vector_field(xf, sh, g, j, true, h, dt, order);
        axpy(acc, xxf, cplx(1.0));
        Vec yf = vector_field(f, sh, g, j, false, h, dt, order);
        Vec yyf = vector_field(yf, sh, g, j, false, h, dt, order);
        axpy(acc, yyf, cplx(1.0));
    }
    return acc;
}

// Lap = sum_a d_a(d_a .) over the spatial axes (composed stencils).
Vec laplacian(const Vec& f, const Shape& sh, unsigned spatial_axes, double h,
              unsigned order) {
    Vec acc(f.size(), cplx(0.0));
    for (unsigned a = 0; a < spatial_axes; ++a) {
        Vec da = d1(f, sh, a, h, order);
        Vec dda = d1(da, sh, a, h, order);
        axpy(acc, dda, cplx(1.0));
    }
    return acc;
}

// (|x|^2 + |y|^2) multiplier added as  acc += factor * |z|^2 f.
void add_r2_mult(Vec& acc, const Vec& f, const Shape& sh, const SpatialGrid& g,
                 double factor) {
    const unsigned axes = g.axes();
    for (std::size_t i = 0; i < f.size(); ++i) {
        double r2 = 0.0;
        for (unsigned a = 0; a < axes; ++a) {
            const std::size_t k = (i / sh.strides[a]) % sh.dims[a];
            const double c = g.coord(static_cast<unsigned>(k));
            r2 += c * c;
        }
        acc[i] += factor * r2 * f[i];
    }
}

// rotation term sum_j (x_j d_{y_j} - y_j d_{x_j}) f
Vec rotation_term(const Vec& f, const Shape& sh, const SpatialGrid& g, double h,
                  unsigned order) {
    const unsigned n = g.n();
    Vec acc(f.size(), cplx(0.0));
    for (unsigned j = 0; j < n; ++j) {
        Vec dy = d1(f, sh, n + j, h, order);
        mul_coord(dy, sh, j, g, 1.0);
        axpy(acc, dy, cplx(1.0));
        Vec dx = d1(f, sh, j, h, order);
        mul_coord(dx, sh, n + j, g, -1.0);
        axpy(acc, dx, cplx(1.0));
    }
    return acc;
}

Vec apply_slice_kind(const OperatorSpec& op, const Vec& f, const Shape& sh,
                     const SpatialGrid& g) {
    const double h = g.spacing();
    const unsigned order = op.order;
    switch (op.kind) {
        case OperatorKind::Euclidean:
            return laplacian(f, sh, g.axes(), h, order);
        case OperatorKind::Hermite: {
            Vec acc = laplacian(f, sh, g.axes(), h, order);
            add_r2_mult(acc, f, sh, g, -0.25 * op.lambda * op.lambda);
            return acc;
        }
        case OperatorKind::Twisted: {
            Vec acc = laplacian(f, sh, g.axes(), h, order);
            add_r2_mult(acc, f, sh, g, -0.25 * op.lambda * op.lambda);
            Vec rot = rotation_term(f, sh, g, h, order);
            axpy(acc, rot, cplx(0.0, op.lambda));
            return acc;
        }
        case OperatorKind::Magnetic: {
            // (grad - i C)^2 = Lap - 2i C.grad - i (div C) - |C|^2, div C = 0,
            // C = (lambda/2) J (x,y) = (lambda/2)(y, -x)
            Vec acc = laplacian(f, sh, g.axes(), h, order);
            const unsigned n = g.n();
            for (unsigned j = 0; j < n; ++j) {
                Vec dx = d1(f, sh, j, h, order);
                mul_coord(dx, sh, n + j, g, 1.0);                 // y_j d_{x_j}
                axpy(acc, dx, cplx(0.0, -op.lambda));             // -2i (lambda/2)
                Vec dy = d1(f, sh, n + j, h, order);
                mul_coord(dy, sh, j, g, -1.0);                    // -x_j d_{y_j}
                axpy(acc, dy, cplx(0.0, -op.lambda));
            }
            add_r2_mult(acc, f, sh, g, -0.25 * op.lambda * op.lambda);  // -|C|^2
            return acc;
        }
        default:
            throw std::invalid_argument("apply: operator needs the t axis");
    }
}

} // namespace

OperatorSpec::OperatorSpec(OperatorKind k, double lam, unsigned j_, unsigned ord)
    : kind(k), lambda(lam), j(j_), order(ord) {
    if (order != 2 && order != 4)
        throw std::invalid_argument("OperatorSpec: stencil order must be 2 or 4");
    if (j == 0) throw std::invalid_argument("OperatorSpec: axis index is 1-based");
}

Slice2N apply(const OperatorSpec& op, const Slice2N& f) {
    switch (op.kind) {
        case OperatorKind::SubLaplacian:
        case OperatorKind::VectorFieldX:
        case OperatorKind::VectorFieldY:
        case OperatorKind::CentralT:
            throw std::invalid_argument("apply: operator kind requires the t axis");
        default: break;
    }
    const Shape sh = Shape::of(f);
    return Slice2N(f.grid, apply_slice_kind(op, f.values, sh, f.grid));
}

HeisenbergSample apply(const OperatorSpec& op, const HeisenbergSample& f) {
    const Shape sh = Shape::of(f);
    const double h = f.grid.spacing();
    const double dt = f.axis.dt();
    const unsigned t_axis = sh.naxes - 1;
    switch (op.kind) {
        case OperatorKind::SubLaplacian:
            return HeisenbergSample(f.grid, f.axis,
                                    sublaplacian(f.values, sh, f.grid, h, dt, op.order));
        case OperatorKind::VectorFieldX:
            if (op.j > f.grid.n()) throw std::invalid_argument("apply: axis index > n");
            return HeisenbergSample(
                f.grid, f.axis,
                vector_field(f.values, sh, f.grid, op.j, true, h, dt, op.order));
        case OperatorKind::VectorFieldY:
            if (op.j > f.grid.n()) throw std::invalid_argument("apply: axis index > n");
            return HeisenbergSample(
                f.grid, f.axis,
                vector_field(f.values, sh, f.grid, op.j, false, h, dt, op.order));
        case OperatorKind::CentralT:
            return HeisenbergSample(f.grid, f.axis, d1(f.values, sh, t_axis, dt, op.order));
        default: {
            // spatial operators act per t-column
            return HeisenbergSample(f.grid, f.axis,
                                    apply_slice_kind(op, f.values, sh, f.grid));
        }
    }
}

HeisenbergSample apply_sublaplacian_expanded(const HeisenbergSample& f, unsigned order) {
    const Shape sh = Shape::of(f);
    const SpatialGrid& g = f.grid;
    const double h = g.spacing();
    const double dt = f.axis.dt();
    const unsigned t_axis = sh.naxes - 1;

    Vec acc = laplacian(f.values, sh, g.axes(), h, order);
    Vec dtf = d1(f.values, sh, t_axis, dt, order);
    Vec dttf = d1(dtf, sh, t_axis, dt, order);
    add_r2_mult(acc, dttf, sh, g, 0.25);
    Vec rot = rotation_term(dtf, sh, g, h, order);
    axpy(acc, rot, cplx(-1.0));
    return HeisenbergSample(f.grid, f.axis, std::move(acc));
}

namespace {

template <typename Field>
double field_norm(const Field& u);
template <>
double field_norm<Slice2N>(const Slice2N& u) { return std::sqrt(norm_sq(u)); }
template <>
double field_norm<HeisenbergSample>(const HeisenbergSample& u) {
    return std::sqrt(norm_sq(u));
}

double windowed_norm(const HeisenbergSample& u, unsigned t_margin) {
    const unsigned M = u.axis.points();
    if (t_margin == 0 || 2 * t_margin >= M) {
        if (2 * t_margin >= M)
            throw std::invalid_argument("pde_residual: t margin eats the whole axis");
        return field_norm(u);
    }
    double acc = 0.0;
    for (std::size_t zi = 0; zi < u.grid.size(); ++zi)
        for (unsigned j = t_margin; j < M - t_margin; ++j) acc += std::norm(u.at(zi, j));
    return std::sqrt(u.grid.cell_volume() * u.axis.dt() * acc);
}

void mul_potential(Vec& v, const Slice2N& pot, unsigned t_points) {
    if (t_points == 0) {
        for (std::size_t i = 0; i < v.size(); ++i) v[i] *= pot.values[i];
    } else {
        for (std::size_t zi = 0; zi < pot.values.size(); ++zi)
            for (unsigned j = 0; j < t_points; ++j) v[zi * t_points + j] *= pot.values[zi];
    }
}

template <typename Field>
double residual_impl(const std::vector<Field>& path, const OperatorSpec& op,
                     const Slice2N* potential, double dt, unsigned t_margin) {
    if (path.size() < 3)
        throw std::invalid_argument("pde_residual: need at least 3 time samples");
    if (dt <= 0.0) throw std::invalid_argument("pde_residual: dt must be positive");

    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < path.size(); ++k) {
        Field res = apply(op, path[k]);
        if (potential) {
            Field pu = path[k];
            if constexpr (std::is_same_v<Field, Slice2N>)
                mul_potential(pu.values, *potential, 0);
            else
                mul_potential(pu.values, *potential, path[k].axis.points());
            for (std::size_t i = 0; i < res.values.size(); ++i)
                res.values[i] += pu.values[i];
        }
        const cplx ihalf = cplx(0.0, 1.0) / (2.0 * dt);
        for (std::size_t i = 0; i < res.values.size(); ++i)
            res.values[i] += ihalf * (path[k + 1].values[i] - path[k - 1].values[i]);

        double den, num;
        if constexpr (std::is_same_v<Field, HeisenbergSample>) {
            den = windowed_norm(path[k], t_margin);
            num = windowed_norm(res, t_margin);
        } else {
            den = field_norm(path[k]);
            num = field_norm(res);
        }
        if (den == 0.0) continue;   // zero field contributes nothing
        worst = std::max(worst, num / den);
    }
    return worst;
}

} // namespace

double pde_residual(const std::vector<Slice2N>& u_path, const OperatorSpec& op,
                    const Slice2N* potential, double dt) {
    return residual_impl(u_path, op, potential, dt, 0);
}

double pde_residual(const std::vector<HeisenbergSample>& u_path, const OperatorSpec& op,
                    const Slice2N* potential, double dt, const ResidualOptions& opts) {
    return residual_impl(u_path, op, potential, dt, opts.t_margin);
}

} // namespace heisenfft
