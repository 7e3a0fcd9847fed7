#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include <gmpxx.h>

#include "multiform/errors.hpp"

namespace multiform {

/// The four coefficient fields the library computes over.
///   Q   exact rationals
///   Qi  exact Gaussian rationals, Q(i)
///   R64 double-precision reals
///   C64 double-precision complex numbers
enum class Kind : std::uint8_t { Q, Qi, R64, C64 };

constexpr bool is_exact(Kind k) { return k == Kind::Q || k == Kind::Qi; }
constexpr bool is_complex(Kind k) { return k == Kind::Qi || k == Kind::C64; }

/// The complex field containing k (Q -> Qi, R64 -> C64).
constexpr Kind complexification(Kind k) {
    return is_exact(k) ? Kind::Qi : Kind::C64;
}

/// The float field a failed exact computation falls back to.
constexpr Kind float_fallback(Kind k) {
    return is_complex(k) ? Kind::C64 : Kind::R64;
}

const char* kind_name(Kind k);
std::optional<Kind> kind_from_name(const std::string& name);

/// Comparison tolerances for the float kinds. Exact kinds ignore the policy
/// entirely; their comparisons are structural.
struct TolerancePolicy {
    double rel = 1e-9;
    double abs = 1e-12;
};

struct GaussianRational {
    mpq_class re;
    mpq_class im;
    friend bool operator==(const GaussianRational&, const GaussianRational&) = default;
};

/// Immutable element of one of the four fields. Exact values are kept
/// canonical (reduced, positive denominator) so equality is structural;
/// float values reject NaN and infinity at construction.
class Scalar {
public:
    Scalar() : value_(mpq_class(0)) {}

    static Scalar rational(mpq_class q);
    static Scalar rational(long num, long den = 1);
    static Scalar gaussian(mpq_class re, mpq_class im);
    static Scalar real(double x);
    static Scalar cplx(std::complex<double> z);

    static Scalar zero(Kind k);
    static Scalar one(Kind k);
    static Scalar from_int(long n, Kind k);

    Kind kind() const;
    bool is_zero() const;
    bool is_one() const;

    Scalar operator-() const;
    Scalar conj() const;
    Scalar inverse() const;  // throws SingularMatrix on zero

    friend Scalar operator+(const Scalar& a, const Scalar& b);
    friend Scalar operator-(const Scalar& a, const Scalar& b);
    friend Scalar operator*(const Scalar& a, const Scalar& b);
    friend Scalar operator/(const Scalar& a, const Scalar& b);
    friend bool operator==(const Scalar& a, const Scalar& b);

    /// |value| as a double. For exact kinds this is an approximation used
    /// only for pivot selection and diagnostics, never for equality.
    double abs_approx() const;

    std::complex<double> to_complex_double() const;

    /// Real / imaginary part as a Scalar of the matching real kind.
    Scalar real_part() const;
    Scalar imag_part() const;

    /// Value conversion between kinds. Widenings (Q->Qi, Q->R64, anything
    /// float-ward) always succeed; float->exact is rejected.
    Scalar convert_to(Kind k) const;

    const mpq_class& rational_value() const;
    const GaussianRational& gaussian_value() const;
    double real_value() const;
    std::complex<double> complex_value() const;

    std::string str() const;
    static Scalar parse(const std::string& text, Kind k);

    /// k-th root in the same field: exact kinds get an exact root or
    /// nullopt (NoRootInField outcome); float kinds get the principal root.
    /// Preconditions: a != 0; for R64 either a > 0 or k odd.
    static std::optional<Scalar> nth_root(const Scalar& a, int k);

    static bool approx_eq(const Scalar& a, const Scalar& b, const TolerancePolicy& pol);

private:
    explicit Scalar(std::variant<mpq_class, GaussianRational, double, std::complex<double>> v)
        : value_(std::move(v)) {}

    std::variant<mpq_class, GaussianRational, double, std::complex<double>> value_;
};

}  // namespace multiform
