#pragma once

#include <utility>
#include <vector>

#include "multiform/linear_map.hpp"
#include "multiform/scalar.hpp"

namespace multiform {

/// Dense univariate polynomial over one Scalar kind, constant term first.
class Poly {
public:
    explicit Poly(Kind k) : kind_(k) {}

    static Poly constant(const Scalar& c);
    static Poly x(Kind k);
    static Poly from_coeffs(std::vector<Scalar> coeffs);

    Kind kind() const { return kind_; }
    int degree() const;  // -1 for the zero polynomial
    Scalar coeff(int i) const;
    const std::vector<Scalar>& coeffs() const { return coeffs_; }

    Poly operator+(const Poly& rhs) const;
    Poly operator-(const Poly& rhs) const;
    Poly operator*(const Poly& rhs) const;
    Poly scaled(const Scalar& c) const;

    /// this(rhs(x)) by Horner on polynomials.
    Poly compose(const Poly& rhs) const;

    Scalar eval(const Scalar& x) const;

    /// f(T) by matrix Horner. Requires a nonempty coefficient list.
    LinearMap eval_matrix(const LinearMap& t) const;

    /// Remainder of this modulo a monic divisor.
    Poly mod_monic(const Poly& divisor) const;

    /// Coefficient-wise real/imag split of a complex-kind polynomial into
    /// two polynomials over the matching real kind.
    std::pair<Poly, Poly> split_real_imag() const;

    Poly convert_to(Kind k) const;

    void trim();

private:
    Kind kind_;
    std::vector<Scalar> coeffs_;
};

/// f(T). The operation the reduction pipeline uses to assemble block maps.
inline LinearMap poly_apply(const Poly& f, const LinearMap& t) { return f.eval_matrix(t); }

}  // namespace multiform
