#include "multiform/poly.hpp"

namespace multiform {

Poly Poly::constant(const Scalar& c) {
    Poly p(c.kind());
    p.coeffs_ = {c};
    p.trim();
    return p;
}

Poly Poly::x(Kind k) {
    Poly p(k);
    p.coeffs_ = {Scalar::zero(k), Scalar::one(k)};
    return p;
}

Poly Poly::from_coeffs(std::vector<Scalar> coeffs) {
    if (coeffs.empty()) throw Error("empty coefficient list");
    Poly p(coeffs[0].kind());
    for (const auto& c : coeffs)
        if (c.kind() != p.kind_) throw KindMismatch("mixed kinds in polynomial");
    p.coeffs_ = std::move(coeffs);
    p.trim();
    return p;
}

int Poly::degree() const { return static_cast<int>(coeffs_.size()) - 1; }

Scalar Poly::coeff(int i) const {
    if (i < 0 || i >= static_cast<int>(coeffs_.size())) return Scalar::zero(kind_);
    return coeffs_[i];
}

void Poly::trim() {
    while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

Poly Poly::operator+(const Poly& rhs) const {
    if (kind_ != rhs.kind_) throw KindMismatch("polynomial kind mismatch");
    Poly out(kind_);
    std::size_t n = std::max(coeffs_.size(), rhs.coeffs_.size());
    out.coeffs_.resize(n, Scalar::zero(kind_));
    for (std::size_t i = 0; i < n; ++i)
        out.coeffs_[i] = coeff(static_cast<int>(i)) + rhs.coeff(static_cast<int>(i));
    out.trim();
    return out;
}

Poly Poly::operator-(const Poly& rhs) const { return *this + rhs.scaled(-Scalar::one(kind_)); }

Poly Poly::operator*(const Poly& rhs) const {
    if (kind_ != rhs.kind_) throw KindMismatch("polynomial kind mismatch");
    Poly out(kind_);
    if (coeffs_.empty() || rhs.coeffs_.empty()) return out;
    out.coeffs_.assign(coeffs_.size() + rhs.coeffs_.size() - 1, Scalar::zero(kind_));
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i].is_zero()) continue;
        for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j)
            out.coeffs_[i + j] = out.coeffs_[i + j] + coeffs_[i] * rhs.coeffs_[j];
    }
    out.trim();
    return out;
}

Poly Poly::scaled(const Scalar& c) const {
    Poly out(kind_);
    out.coeffs_.reserve(coeffs_.size());
    for (const auto& a : coeffs_) out.coeffs_.push_back(a * c);
    out.trim();
    return out;
}

Poly Poly::compose(const Poly& rhs) const {
    Poly acc(kind_);
    for (int i = degree(); i >= 0; --i) {
        acc = acc * rhs;
        acc = acc + Poly::constant(coeffs_[static_cast<std::size_t>(i)]);
    }
    return acc;
}

Scalar Poly::eval(const Scalar& x) const {
    Scalar acc = Scalar::zero(kind_);
    for (int i = degree(); i >= 0; --i) acc = acc * x + coeffs_[static_cast<std::size_t>(i)];
    return acc;
}

LinearMap Poly::eval_matrix(const LinearMap& t) const {
    if (coeffs_.empty()) throw Error("matrix value of empty polynomial");
    if (!t.is_square()) throw DimensionMismatch("polynomial of non-square matrix");
    if (t.kind() != kind_) throw KindMismatch("polynomial/matrix kind mismatch");
    LinearMap acc = LinearMap::zeros(t.rows(), t.rows(), kind_);
    for (int i = degree(); i >= 0; --i) {
        acc = acc * t;
        const Scalar& c = coeffs_[static_cast<std::size_t>(i)];
        for (int d = 0; d < t.rows(); ++d) acc.at(d, d) = acc.at(d, d) + c;
    }
    return acc;
}

Poly Poly::mod_monic(const Poly& divisor) const {
    if (divisor.degree() < 0) throw Error("division by zero polynomial");
    if (!divisor.coeffs_.back().is_one()) throw Error("divisor must be monic");
    Poly rem = *this;
    int dd = divisor.degree();
    while (rem.degree() >= dd) {
        Scalar lead = rem.coeffs_.back();
        int shift = rem.degree() - dd;
        for (int i = 0; i <= dd; ++i) {
            std::size_t k = static_cast<std::size_t>(shift + i);
            rem.coeffs_[k] = rem.coeffs_[k] - lead * divisor.coeff(i);
        }
        rem.trim();
        if (static_cast<int>(rem.coeffs_.size()) - 1 == dd + shift) {
            // float dust kept the degree; clear the leading slot outright
            rem.coeffs_.pop_back();
            rem.trim();
        }
    }
    return rem;
}

std::pair<Poly, Poly> Poly::split_real_imag() const {
    Kind rk = kind_ == Kind::Qi ? Kind::Q : Kind::R64;
    if (!is_complex(kind_)) throw KindMismatch("split of a real-kind polynomial");
    Poly re(rk), im(rk);
    std::vector<Scalar> rc, ic;
    rc.reserve(coeffs_.size());
    ic.reserve(coeffs_.size());
    for (const auto& c : coeffs_) {
        rc.push_back(c.real_part());
        ic.push_back(c.imag_part());
    }
    if (rc.empty()) return {re, im};
    re = Poly::from_coeffs(std::move(rc));
    im = Poly::from_coeffs(std::move(ic));
    return {re, im};
}

Poly Poly::convert_to(Kind k) const {
    Poly out(k);
    out.coeffs_.reserve(coeffs_.size());
    for (const auto& c : coeffs_) out.coeffs_.push_back(c.convert_to(k));
    out.trim();
    return out;
}

}  // namespace multiform
