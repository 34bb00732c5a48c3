#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <vector>

#include "heisenfft/field.hpp"
#include "heisenfft/grid.hpp"

namespace heisenfft {

/// Affine map w -> A w + b on R^d, d <= 4.  A is row-major d x d.
struct AffineMap {
    unsigned dim = 2;
    std::array<double, 16> A{};
    std::array<double, 4> b{};

    static AffineMap identity(unsigned dim);
    static AffineMap scaling(unsigned dim, double factor);
    /// Block rotation e^{-t J} = [[cos t I_n, -sin t I_n],[sin t I_n, cos t I_n]]
    /// acting on (x_1..x_n, y_1..y_n); dim = 2n.
    static AffineMap phase_rotation(unsigned n, double t);

    void apply(const double* in, double* out) const;
    double det() const;
    double max_row_norm() const;
};

/// Closed symbolic family: finite sums of  p(w) * exp(E(w))  with p a complex
/// polynomial of total degree <= 4 and E a complex quadratic polynomial whose
/// quadratic part has negative-semidefinite real part.  The family is closed
/// under affine composition, so transformed fields evaluate exactly (no
/// interpolation path exists).
class AnalyticField {
public:
    struct Monomial {
        std::array<std::uint8_t, 4> exp{};
        cplx coeff{0.0};
    };

    struct Term {
        std::vector<Monomial> poly;         // empty poly means the zero term
        // E(w) = w^T Q w + l.w + c, Q symmetric row-major dim x dim
        std::array<cplx, 16> Q{};
        std::array<cplx, 4> l{};
        cplx c{0.0};
    };

    explicit AnalyticField(unsigned dim);
    AnalyticField(unsigned dim, std::vector<Term> terms);

    unsigned dim() const { return dim_; }
    const std::vector<Term>& terms() const { return terms_; }

    cplx eval(const double* point) const;
    cplx eval(const std::vector<double>& point) const { return eval(point.data()); }

    AnalyticField operator+(const AnalyticField& other) const;
    AnalyticField scaled(cplx factor) const;
    /// Pointwise product; throws if any combined polynomial degree exceeds 4.
    AnalyticField operator*(const AnalyticField& other) const;

    // --- builders (dim = 2n) ---
    static AnalyticField constant(unsigned dim, cplx value);
    /// exp(-a |w - center|^2); center may be empty for the origin.
    static AnalyticField gaussian(unsigned dim, double a,
                                  const std::vector<double>& center = {});
    /// exp(i c |w|^2)
    static AnalyticField chirp(unsigned dim, double c);
    /// single monomial  coeff * prod w_a^{e_a}
    static AnalyticField monomial(unsigned dim, const std::array<std::uint8_t, 4>& exp,
                                  cplx coeff);

private:
    void validate() const;
    unsigned dim_;
    std::vector<Term> terms_;
};

/// g with g(w) = f(A w + b), exact within the family.
/// Throws if A is singular (|det| below 1e-12 of max row norm^dim).
AnalyticField affine_pushforward(const AnalyticField& f, const AffineMap& map);

/// Evaluates the field at every grid point.
Slice2N sample(const AnalyticField& f, const SpatialGrid& grid);

} // namespace heisenfft
