#include "heisenfft/analytic_field.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "heisenfft/parallel.hpp"

namespace heisenfft {

namespace {

constexpr unsigned kMaxDegree = 4;

unsigned degree(const AnalyticField::Monomial& m) {
    return m.exp[0] + m.exp[1] + m.exp[2] + m.exp[3];
}

using Poly = std::vector<AnalyticField::Monomial>;

Poly normalize(const Poly& p) {
    std::map<std::array<std::uint8_t, 4>, cplx> acc;
    for (const auto& m : p) acc[m.exp] += m.coeff;
    Poly out;
    for (const auto& [e, c] : acc)
        if (std::abs(c) > 0.0) out.push_back({e, c});
    return out;
}

Poly poly_mul(const Poly& a, const Poly& b) {
    Poly out;
    for (const auto& ma : a)
        for (const auto& mb : b) {
            AnalyticField::Monomial m;
            for (int i = 0; i < 4; ++i) m.exp[i] = ma.exp[i] + mb.exp[i];
            if (degree(m) > kMaxDegree)
                throw std::invalid_argument(
                    "AnalyticField: polynomial degree would exceed 4");
            m.coeff = ma.coeff * mb.coeff;
            out.push_back(m);
        }
    return normalize(out);
}

cplx poly_eval(const Poly& p, const double* w, unsigned dim) {
    cplx acc(0.0);
    for (const auto& m : p) {
        double v = 1.0;
        for (unsigned a = 0; a < dim; ++a)
            for (unsigned e = 0; e < m.exp[a]; ++e) v *= w[a];
        acc += m.coeff * v;
    }
    return acc;
}

// Jacobi eigenvalue sweep for a symmetric dim x dim matrix (dim <= 4).
double max_sym_eigenvalue(const double* S, unsigned dim) {
    double a[16];
    std::copy(S, S + dim * dim, a);
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (unsigned i = 0; i < dim; ++i)
            for (unsigned j = i + 1; j < dim; ++j) off += a[i * dim + j] * a[i * dim + j];
        if (off < 1e-30) break;
        for (unsigned p = 0; p < dim; ++p)
            for (unsigned q = p + 1; q < dim; ++q) {
                const double apq = a[p * dim + q];
                if (std::abs(apq) < 1e-18) continue;
                const double theta = (a[q * dim + q] - a[p * dim + p]) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (unsigned k = 0; k < dim; ++k) {
                    const double akp = a[k * dim + p], akq = a[k * dim + q];
                    a[k * dim + p] = c * akp - s * akq;
                    a[k * dim + q] = s * akp + c * akq;
                }
                for (unsigned k = 0; k < dim; ++k) {
                    const double apk = a[p * dim + k], aqk = a[q * dim + k];
                    a[p * dim + k] = c * apk - s * aqk;
                    a[q * dim + k] = s * apk + c * aqk;
                }
            }
    }
    double mx = a[0];
    for (unsigned i = 1; i < dim; ++i) mx = std::max(mx, a[i * dim + i]);
    return mx;
}

} // namespace

// ---------------------------------------------------------------- AffineMap

AffineMap AffineMap::identity(unsigned dim) {
    AffineMap m;
    m.dim = dim;
    for (unsigned i = 0; i < dim; ++i) m.A[i * dim + i] = 1.0;
    return m;
}

AffineMap AffineMap::scaling(unsigned dim, double factor) {
    AffineMap m;
    m.dim = dim;
    for (unsigned i = 0; i < dim; ++i) m.A[i * dim + i] = factor;
    return m;
}

AffineMap AffineMap::phase_rotation(unsigned n, double t) {
    AffineMap m;
    const unsigned dim = 2 * n;
    m.dim = dim;
    const double c = std::cos(t), s = std::sin(t);
    for (unsigned j = 0; j < n; ++j) {
        m.A[j * dim + j] = c;
        m.A[j * dim + (n + j)] = -s;
        m.A[(n + j) * dim + j] = s;
        m.A[(n + j) * dim + (n + j)] = c;
    }
    return m;
}

void AffineMap::apply(const double* in, double* out) const {
    for (unsigned i = 0; i < dim; ++i) {
        double acc = b[i];
        for (unsigned j = 0; j < dim; ++j) acc += A[i * dim + j] * in[j];
        out[i] = acc;
    }
}

double AffineMap::det() const {
    const auto at = [&](unsigned i, unsigned j) { return A[i * dim + j]; };
    switch (dim) {
        case 1: return at(0, 0);
        case 2: return at(0, 0) * at(1, 1) - at(0, 1) * at(1, 0);
        case 3:
            return at(0, 0) * (at(1, 1) * at(2, 2) - at(1, 2) * at(2, 1)) -
                   at(0, 1) * (at(1, 0) * at(2, 2) - at(1, 2) * at(2, 0)) +
                   at(0, 2) * (at(1, 0) * at(2, 1) - at(1, 1) * at(2, 0));
        case 4: {
            double d = 0.0;
            for (unsigned c0 = 0; c0 < 4; ++c0) {
                double minor[9];
                unsigned mi = 0;
                for (unsigned i = 1; i < 4; ++i)
                    for (unsigned j = 0; j < 4; ++j)
                        if (j != c0) minor[mi++] = at(i, j);
                const double m3 = minor[0] * (minor[4] * minor[8] - minor[5] * minor[7]) -
                                  minor[1] * (minor[3] * minor[8] - minor[5] * minor[6]) +
                                  minor[2] * (minor[3] * minor[7] - minor[4] * minor[6]);
                d += ((c0 % 2) ? -1.0 : 1.0) * at(0, c0) * m3;
            }
            return d;
        }
        default: throw std::logic_error("AffineMap: dim out of range");
    }
}

double AffineMap::max_row_norm() const {
    double mx = 0.0;
    for (unsigned i = 0; i < dim; ++i) {
        double r = 0.0;
        for (unsigned j = 0; j < dim; ++j) r += A[i * dim + j] * A[i * dim + j];
        mx = std::max(mx, std::sqrt(r));
    }
    return mx;
}

// ------------------------------------------------------------ AnalyticField

AnalyticField::AnalyticField(unsigned dim) : dim_(dim) {
    if (dim_ == 0 || dim_ > 4)
        throw std::invalid_argument("AnalyticField: dim must be in 1..4");
}

AnalyticField::AnalyticField(unsigned dim, std::vector<Term> terms)
    : dim_(dim), terms_(std::move(terms)) {
    if (dim_ == 0 || dim_ > 4)
        throw std::invalid_argument("AnalyticField: dim must be in 1..4");
    validate();
}

void AnalyticField::validate() const {
    for (const auto& t : terms_) {
        for (const auto& m : t.poly) {
            if (degree(m) > kMaxDegree)
                throw std::invalid_argument("AnalyticField: polynomial degree > 4");
            for (unsigned a = dim_; a < 4; ++a)
                if (m.exp[a] != 0)
                    throw std::invalid_argument("AnalyticField: monomial uses axis >= dim");
        }
        // Re(Q) must be negative semidefinite (up to a small slack).
        double reQ[16];
        double scale = 0.0;
        for (unsigned i = 0; i < dim_ * dim_; ++i) {
            reQ[i] = t.Q[i].real();
            scale = std::max(scale, std::abs(reQ[i]));
        }
        if (scale > 0.0 && max_sym_eigenvalue(reQ, dim_) > 1e-9 * scale)
            throw std::invalid_argument(
                "AnalyticField: Re of quadratic exponent is not negative semidefinite");
    }
}

cplx AnalyticField::eval(const double* w) const {
    cplx acc(0.0);
    for (const auto& t : terms_) {
        cplx e = t.c;
        for (unsigned i = 0; i < dim_; ++i) {
            e += t.l[i] * w[i];
            for (unsigned j = 0; j < dim_; ++j) e += t.Q[i * dim_ + j] * (w[i] * w[j]);
        }
        acc += poly_eval(t.poly, w, dim_) * std::exp(e);
    }
    return acc;
}

AnalyticField AnalyticField::operator+(const AnalyticField& other) const {
    if (dim_ != other.dim_)
        throw std::invalid_argument("AnalyticField: dimension mismatch in +");
    std::vector<Term> terms = terms_;
    terms.insert(terms.end(), other.terms_.begin(), other.terms_.end());
    return AnalyticField(dim_, std::move(terms));
}

AnalyticField AnalyticField::scaled(cplx factor) const {
    std::vector<Term> terms = terms_;
    for (auto& t : terms)
        for (auto& m : t.poly) m.coeff *= factor;
    return AnalyticField(dim_, std::move(terms));
}

AnalyticField AnalyticField::operator*(const AnalyticField& other) const {
    if (dim_ != other.dim_)
        throw std::invalid_argument("AnalyticField: dimension mismatch in *");
    std::vector<Term> terms;
    for (const auto& ta : terms_)
        for (const auto& tb : other.terms_) {
            Term t;
            t.poly = poly_mul(ta.poly, tb.poly);
            for (unsigned i = 0; i < dim_ * dim_; ++i) t.Q[i] = ta.Q[i] + tb.Q[i];
            for (unsigned i = 0; i < dim_; ++i) t.l[i] = ta.l[i] + tb.l[i];
            t.c = ta.c + tb.c;
            terms.push_back(std::move(t));
        }
    return AnalyticField(dim_, std::move(terms));
}

AnalyticField AnalyticField::constant(unsigned dim, cplx value) {
    Term t;
    t.poly = {{std::array<std::uint8_t, 4>{0, 0, 0, 0}, value}};
    return AnalyticField(dim, {t});
}

AnalyticField AnalyticField::gaussian(unsigned dim, double a,
                                      const std::vector<double>& center) {
    if (!center.empty() && center.size() != dim)
        throw std::invalid_argument("AnalyticField::gaussian: center size mismatch");
    Term t;
    t.poly = {{std::array<std::uint8_t, 4>{0, 0, 0, 0}, cplx(1.0)}};
    // -a |w - c|^2 = -a w.w + 2a c.w - a c.c
    for (unsigned i = 0; i < dim; ++i) {
        t.Q[i * dim + i] = cplx(-a);
        const double ci = center.empty() ? 0.0 : center[i];
        t.l[i] = cplx(2.0 * a * ci);
        t.c += cplx(-a * ci * ci);
    }
    return AnalyticField(dim, {t});
}

AnalyticField AnalyticField::chirp(unsigned dim, double c) {
    Term t;
    t.poly = {{std::array<std::uint8_t, 4>{0, 0, 0, 0}, cplx(1.0)}};
    for (unsigned i = 0; i < dim; ++i) t.Q[i * dim + i] = cplx(0.0, c);
    return AnalyticField(dim, {t});
}

AnalyticField AnalyticField::monomial(unsigned dim, const std::array<std::uint8_t, 4>& exp,
                                      cplx coeff) {
    Term t;
    t.poly = {{exp, coeff}};
    return AnalyticField(dim, {t});
}

AnalyticField affine_pushforward(const AnalyticField& f, const AffineMap& map) {
    const unsigned dim = f.dim();
    if (map.dim != dim)
        throw std::invalid_argument("affine_pushforward: dimension mismatch");
    const double d = std::abs(map.det());
    double rn = map.max_row_norm();
    double scale = 1.0;
    for (unsigned i = 0; i < dim; ++i) scale *= rn;
    if (d < 1e-12 * std::max(scale, 1e-300))
        throw std::invalid_argument("affine_pushforward: map is singular");

    // linear substitutions x_i = sum_j A_ij w_j + b_i as degree-1 polynomials
    std::vector<Poly> subst(dim);
    for (unsigned i = 0; i < dim; ++i) {
        Poly li;
        if (map.b[i] != 0.0)
            li.push_back({std::array<std::uint8_t, 4>{0, 0, 0, 0}, cplx(map.b[i])});
        for (unsigned j = 0; j < dim; ++j) {
            if (map.A[i * dim + j] == 0.0) continue;
            std::array<std::uint8_t, 4> e{0, 0, 0, 0};
            e[j] = 1;
            li.push_back({e, cplx(map.A[i * dim + j])});
        }
        if (li.empty())
            li.push_back({std::array<std::uint8_t, 4>{0, 0, 0, 0}, cplx(0.0)});
        subst[i] = li;
    }

    std::vector<AnalyticField::Term> out;
    for (const auto& t : f.terms()) {
        AnalyticField::Term nt;
        // polynomial part: substitute
        Poly acc;
        for (const auto& m : t.poly) {
            Poly prod = {{std::array<std::uint8_t, 4>{0, 0, 0, 0}, m.coeff}};
            for (unsigned a = 0; a < dim; ++a)
                for (unsigned e = 0; e < m.exp[a]; ++e) prod = poly_mul(prod, subst[a]);
            acc.insert(acc.end(), prod.begin(), prod.end());
        }
        nt.poly = normalize(acc);

        // quadratic exponent: E(Aw+b) = w^T A^T Q A w + (2 b^T Q A + l^T A) w + b^T Q b + l.b + c
        for (unsigned i = 0; i < dim; ++i)
            for (unsigned j = 0; j < dim; ++j) {
                cplx q(0.0);
                for (unsigned k = 0; k < dim; ++k)
                    for (unsigned ll = 0; ll < dim; ++ll)
                        q += map.A[k * dim + i] * t.Q[k * dim + ll] * map.A[ll * dim + j];
                nt.Q[i * dim + j] = q;
            }
        for (unsigned j = 0; j < dim; ++j) {
            cplx lj(0.0);
            for (unsigned k = 0; k < dim; ++k) {
                lj += t.l[k] * map.A[k * dim + j];
                for (unsigned ll = 0; ll < dim; ++ll)
                    lj += 2.0 * map.b[k] * t.Q[k * dim + ll] * map.A[ll * dim + j];
            }
            nt.l[j] = lj;
        }
        cplx c0 = t.c;
        for (unsigned k = 0; k < dim; ++k) {
            c0 += t.l[k] * map.b[k];
            for (unsigned ll = 0; ll < dim; ++ll)
                c0 += map.b[k] * t.Q[k * dim + ll] * map.b[ll];
        }
        nt.c = c0;
        out.push_back(std::move(nt));
    }
    return AnalyticField(dim, std::move(out));
}

Slice2N sample(const AnalyticField& f, const SpatialGrid& grid) {
    if (f.dim() != grid.axes())
        throw std::invalid_argument("sample: field dimension != grid axes");
    Slice2N out(grid);
    parallel_for(grid.size(), [&](std::size_t b, std::size_t e) {
        double p[4];
        for (std::size_t i = b; i < e; ++i) {
            grid.point(i, p);
            out.values[i] = f.eval(p);
        }
    });
    return out;
}

} // namespace heisenfft
