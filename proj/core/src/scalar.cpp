#include "multiform/scalar.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>

namespace multiform {

namespace {

void require_finite(double x) {
    if (!std::isfinite(x)) throw Error("float scalar must be finite");
}

const char* kind_names[] = {"Q", "Qi", "R64", "C64"};

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

// "a+b*i" / "a-b*i" splitter: find the sign that separates the two parts,
// skipping a leading sign and exponent signs ("1e+06").
bool split_complex_text(const std::string& s, std::string& re_part, std::string& im_part) {
    for (std::size_t pos = s.size(); pos-- > 1;) {
        char c = s[pos];
        if (c != '+' && c != '-') continue;
        char prev = s[pos - 1];
        if (prev == 'e' || prev == 'E') continue;
        re_part = s.substr(0, pos);
        im_part = s.substr(pos);  // keeps the sign
        return true;
    }
    return false;
}

mpq_class parse_mpq(const std::string& text) {
    mpq_class q;
    if (q.set_str(text, 10) != 0) throw ParseError("bad rational literal: '" + text + "'");
    if (q.get_den() == 0) throw ParseError("zero denominator in '" + text + "'");
    q.canonicalize();
    return q;
}

double parse_double_full(const std::string& text) {
    const char* begin = text.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0') throw ParseError("bad float literal: '" + text + "'");
    require_finite(v);
    return v;
}

}  // namespace

const char* kind_name(Kind k) { return kind_names[static_cast<int>(k)]; }

std::optional<Kind> kind_from_name(const std::string& name) {
    for (int i = 0; i < 4; ++i)
        if (name == kind_names[i]) return static_cast<Kind>(i);
    return std::nullopt;
}

Scalar Scalar::rational(mpq_class q) {
    q.canonicalize();
    return Scalar(std::variant<mpq_class, GaussianRational, double, std::complex<double>>(std::move(q)));
}

Scalar Scalar::rational(long num, long den) {
    if (den == 0) throw Error("zero denominator");
    mpq_class q(num, den);
    q.canonicalize();
    return Scalar(std::variant<mpq_class, GaussianRational, double, std::complex<double>>(std::move(q)));
}

Scalar Scalar::gaussian(mpq_class re, mpq_class im) {
    re.canonicalize();
    im.canonicalize();
    return Scalar(std::variant<mpq_class, GaussianRational, double, std::complex<double>>(
        GaussianRational{std::move(re), std::move(im)}));
}

Scalar Scalar::real(double x) {
    require_finite(x);
    return Scalar(std::variant<mpq_class, GaussianRational, double, std::complex<double>>(x));
}

Scalar Scalar::cplx(std::complex<double> z) {
    require_finite(z.real());
    require_finite(z.imag());
    return Scalar(std::variant<mpq_class, GaussianRational, double, std::complex<double>>(z));
}

Scalar Scalar::zero(Kind k) { return from_int(0, k); }
Scalar Scalar::one(Kind k) { return from_int(1, k); }

Scalar Scalar::from_int(long n, Kind k) {
    switch (k) {
        case Kind::Q: return rational(n);
        case Kind::Qi: return gaussian(mpq_class(n), mpq_class(0));
        case Kind::R64: return real(static_cast<double>(n));
        case Kind::C64: return cplx(std::complex<double>(static_cast<double>(n), 0.0));
    }
    throw Error("bad kind");
}

Kind Scalar::kind() const { return static_cast<Kind>(value_.index()); }

bool Scalar::is_zero() const {
    switch (kind()) {
        case Kind::Q: return rational_value() == 0;
        case Kind::Qi: return gaussian_value().re == 0 && gaussian_value().im == 0;
        case Kind::R64: return real_value() == 0.0;
        case Kind::C64: return complex_value() == std::complex<double>(0.0, 0.0);
    }
    return false;
}

bool Scalar::is_one() const { return *this == one(kind()); }

static void check_same_kind(const Scalar& a, const Scalar& b) {
    if (a.kind() != b.kind())
        throw KindMismatch(std::string("scalar kind mismatch: ") + kind_name(a.kind()) + " vs " +
                           kind_name(b.kind()));
}

Scalar Scalar::operator-() const {
    switch (kind()) {
        case Kind::Q: return rational(mpq_class(-rational_value()));
        case Kind::Qi: return gaussian(mpq_class(-gaussian_value().re), mpq_class(-gaussian_value().im));
        case Kind::R64: return real(-real_value());
        case Kind::C64: return cplx(-complex_value());
    }
    throw Error("bad kind");
}

Scalar Scalar::conj() const {
    switch (kind()) {
        case Kind::Q:
        case Kind::R64: return *this;
        case Kind::Qi: return gaussian(gaussian_value().re, mpq_class(-gaussian_value().im));
        case Kind::C64: return cplx(std::conj(complex_value()));
    }
    throw Error("bad kind");
}

Scalar Scalar::inverse() const {
    if (is_zero()) throw SingularMatrix("inverse of zero scalar");
    switch (kind()) {
        case Kind::Q: return rational(mpq_class(1 / rational_value()));
        case Kind::Qi: {
            const auto& g = gaussian_value();
            mpq_class n = g.re * g.re + g.im * g.im;
            return gaussian(mpq_class(g.re / n), mpq_class(-g.im / n));
        }
        case Kind::R64: return real(1.0 / real_value());
        case Kind::C64: return cplx(1.0 / complex_value());
    }
    throw Error("bad kind");
}

Scalar operator+(const Scalar& a, const Scalar& b) {
    check_same_kind(a, b);
    switch (a.kind()) {
        case Kind::Q: return Scalar::rational(mpq_class(a.rational_value() + b.rational_value()));
        case Kind::Qi:
            return Scalar::gaussian(mpq_class(a.gaussian_value().re + b.gaussian_value().re),
                                    mpq_class(a.gaussian_value().im + b.gaussian_value().im));
        case Kind::R64: return Scalar::real(a.real_value() + b.real_value());
        case Kind::C64: return Scalar::cplx(a.complex_value() + b.complex_value());
    }
    throw Error("bad kind");
}

Scalar operator-(const Scalar& a, const Scalar& b) { return a + (-b); }

Scalar operator*(const Scalar& a, const Scalar& b) {
    check_same_kind(a, b);
    switch (a.kind()) {
        case Kind::Q: return Scalar::rational(mpq_class(a.rational_value() * b.rational_value()));
        case Kind::Qi: {
            const auto& x = a.gaussian_value();
            const auto& y = b.gaussian_value();
            return Scalar::gaussian(mpq_class(x.re * y.re - x.im * y.im),
                                    mpq_class(x.re * y.im + x.im * y.re));
        }
        case Kind::R64: return Scalar::real(a.real_value() * b.real_value());
        case Kind::C64: return Scalar::cplx(a.complex_value() * b.complex_value());
    }
    throw Error("bad kind");
}

Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inverse(); }

bool operator==(const Scalar& a, const Scalar& b) {
    check_same_kind(a, b);
    return a.value_ == b.value_;
}

double Scalar::abs_approx() const {
    switch (kind()) {
        case Kind::Q: return std::fabs(rational_value().get_d());
        case Kind::Qi: {
            double re = gaussian_value().re.get_d();
            double im = gaussian_value().im.get_d();
            return std::hypot(re, im);
        }
        case Kind::R64: return std::fabs(real_value());
        case Kind::C64: return std::abs(complex_value());
    }
    return 0.0;
}

std::complex<double> Scalar::to_complex_double() const {
    switch (kind()) {
        case Kind::Q: return {rational_value().get_d(), 0.0};
        case Kind::Qi: return {gaussian_value().re.get_d(), gaussian_value().im.get_d()};
        case Kind::R64: return {real_value(), 0.0};
        case Kind::C64: return complex_value();
    }
    return {};
}

Scalar Scalar::real_part() const {
    switch (kind()) {
        case Kind::Q:
        case Kind::R64: return *this;
        case Kind::Qi: return rational(gaussian_value().re);
        case Kind::C64: return real(complex_value().real());
    }
    throw Error("bad kind");
}

Scalar Scalar::imag_part() const {
    switch (kind()) {
        case Kind::Q: return rational(0);
        case Kind::R64: return real(0.0);
        case Kind::Qi: return rational(gaussian_value().im);
        case Kind::C64: return real(complex_value().imag());
    }
    throw Error("bad kind");
}

Scalar Scalar::convert_to(Kind k) const {
    if (k == kind()) return *this;
    switch (kind()) {
        case Kind::Q: {
            const mpq_class& q = rational_value();
            if (k == Kind::Qi) return gaussian(q, mpq_class(0));
            if (k == Kind::R64) return real(q.get_d());
            return cplx({q.get_d(), 0.0});
        }
        case Kind::Qi: {
            const auto& g = gaussian_value();
            if (k == Kind::C64) return cplx({g.re.get_d(), g.im.get_d()});
            if (g.im != 0) throw KindMismatch("Gaussian rational with nonzero imaginary part cannot narrow");
            if (k == Kind::Q) return rational(g.re);
            return real(g.re.get_d());
        }
        case Kind::R64: {
            if (k == Kind::C64) return cplx({real_value(), 0.0});
            throw KindMismatch("cannot convert float to exact kind");
        }
        case Kind::C64: {
            if (k == Kind::R64) {
                if (complex_value().imag() != 0.0)
                    throw KindMismatch("complex with nonzero imaginary part cannot narrow");
                return real(complex_value().real());
            }
            throw KindMismatch("cannot convert float to exact kind");
        }
    }
    throw Error("bad kind");
}

const mpq_class& Scalar::rational_value() const { return std::get<mpq_class>(value_); }
const GaussianRational& Scalar::gaussian_value() const { return std::get<GaussianRational>(value_); }
double Scalar::real_value() const { return std::get<double>(value_); }
std::complex<double> Scalar::complex_value() const { return std::get<std::complex<double>>(value_); }

std::string Scalar::str() const {
    switch (kind()) {
        case Kind::Q: return rational_value().get_str();
        case Kind::Qi: {
            const auto& g = gaussian_value();
            mpq_class abs_im = g.im >= 0 ? g.im : mpq_class(-g.im);
            return g.re.get_str() + (g.im >= 0 ? "+" : "-") + abs_im.get_str() + "*i";
        }
        case Kind::R64: return format_double(real_value());
        case Kind::C64: {
            std::complex<double> z = complex_value();
            double im = z.imag();
            std::string sign = std::signbit(im) ? "-" : "+";
            return format_double(z.real()) + sign + format_double(std::fabs(im)) + "i";
        }
    }
    return {};
}

Scalar Scalar::parse(const std::string& text, Kind k) {
    switch (k) {
        case Kind::Q: return rational(parse_mpq(text));
        case Kind::Qi: {
            std::string body = text;
            if (body.size() >= 2 && body.compare(body.size() - 2, 2, "*i") == 0) {
                body = body.substr(0, body.size() - 2);
                std::string re_part, im_part;
                if (split_complex_text(body, re_part, im_part))
                    return gaussian(parse_mpq(re_part), parse_mpq(im_part));
                return gaussian(mpq_class(0), parse_mpq(body));
            }
            return gaussian(parse_mpq(body), mpq_class(0));
        }
        case Kind::R64: return real(parse_double_full(text));
        case Kind::C64: {
            std::string body = text;
            if (!body.empty() && body.back() == 'i') {
                body.pop_back();
                std::string re_part, im_part;
                if (split_complex_text(body, re_part, im_part))
                    return cplx({parse_double_full(re_part), parse_double_full(im_part)});
                return cplx({0.0, parse_double_full(body)});
            }
            return cplx({parse_double_full(body), 0.0});
        }
    }
    throw Error("bad kind");
}

bool Scalar::approx_eq(const Scalar& a, const Scalar& b, const TolerancePolicy& pol) {
    check_same_kind(a, b);
    if (is_exact(a.kind())) return a == b;
    double diff = (a - b).abs_approx();
    double scale = std::max(a.abs_approx(), b.abs_approx());
    return diff <= pol.abs + pol.rel * scale;
}

// ------------------------------------------------------------------
// nth_root

namespace {

// Exact k-th root of a nonnegative mpz; nullopt unless op is a perfect power.
std::optional<mpz_class> exact_root_mpz(const mpz_class& op, int k) {
    mpz_class r;
    int exactflag = mpz_root(r.get_mpz_t(), op.get_mpz_t(), k);
    if (exactflag == 0) return std::nullopt;
    return r;
}

// Exact k-th root of a positive rational.
std::optional<mpq_class> exact_root_mpq_pos(const mpq_class& a, int k) {
    auto rn = exact_root_mpz(mpz_class(a.get_num()), k);
    if (!rn) return std::nullopt;
    auto rd = exact_root_mpz(mpz_class(a.get_den()), k);
    if (!rd) return std::nullopt;
    mpq_class r(*rn, *rd);
    r.canonicalize();
    return r;
}

std::optional<mpq_class> exact_root_mpq(const mpq_class& a, int k) {
    if (a > 0) return exact_root_mpq_pos(a, k);
    if (k % 2 == 0) return std::nullopt;
    auto r = exact_root_mpq_pos(mpq_class(-a), k);
    if (!r) return std::nullopt;
    return mpq_class(-*r);
}

struct MpfComplex {
    mpf_class re, im;
};

MpfComplex mpfc_mul(const MpfComplex& a, const MpfComplex& b) {
    return {mpf_class(a.re * b.re - a.im * b.im), mpf_class(a.re * b.im + a.im * b.re)};
}

MpfComplex mpfc_div(const MpfComplex& a, const MpfComplex& b) {
    mpf_class n = b.re * b.re + b.im * b.im;
    return {mpf_class((a.re * b.re + a.im * b.im) / n), mpf_class((a.im * b.re - a.re * b.im) / n)};
}

MpfComplex mpfc_pow(const MpfComplex& a, int k) {
    MpfComplex acc{mpf_class(1, a.re.get_prec()), mpf_class(0, a.re.get_prec())};
    for (int i = 0; i < k; ++i) acc = mpfc_mul(acc, a);
    return acc;
}

// Best rational approximation with denominator <= bound, by continued
// fractions on a high-precision float.
mpq_class rationalize(const mpf_class& x0, const mpz_class& den_bound) {
    mpf_class x = x0;
    mpz_class p_prev(1), q_prev(0), p(0), q(1);  // convergents of 1/x style init reversed below
    // standard setup: h_{-1}=1,h_{-2}=0 ; k_{-1}=0,k_{-2}=1
    mpz_class h1(1), h0(0), k1(0), k0(1);
    for (int iter = 0; iter < 128; ++iter) {
        mpf_class fl = floor(x);
        mpz_class a(fl);
        mpz_class h = a * h1 + h0;
        mpz_class k = a * k1 + k0;
        if (k > den_bound) break;
        h0 = h1; h1 = h;
        k0 = k1; k1 = k;
        mpf_class frac = x - fl;
        if (frac < mpf_class(1e-70)) break;
        x = 1 / frac;
    }
    mpq_class r(h1, k1);
    r.canonicalize();
    return r;
}

bool gaussian_pow_equals(const GaussianRational& base, int k, const GaussianRational& target) {
    mpq_class re(1), im(0);
    for (int i = 0; i < k; ++i) {
        mpq_class nre = re * base.re - im * base.im;
        mpq_class nim = re * base.im + im * base.re;
        re = nre;
        im = nim;
    }
    return re == target.re && im == target.im;
}

// k-th root in Q(i): norm precheck, then high-precision principal root,
// rationalize, and verify exactly.
std::optional<Scalar> gaussian_nth_root(const GaussianRational& z, int k) {
    mpq_class norm = z.re * z.re + z.im * z.im;
    auto norm_root = exact_root_mpq_pos(norm, k);
    if (!norm_root) return std::nullopt;

    const int prec = 320;
    std::complex<double> z_d(z.re.get_d(), z.im.get_d());
    std::complex<double> guess = std::pow(z_d, 1.0 / static_cast<double>(k));
    MpfComplex w{mpf_class(guess.real(), prec), mpf_class(guess.imag(), prec)};
    MpfComplex target{mpf_class(0, prec), mpf_class(0, prec)};
    // exact decimal conversion of the rational parts
    target.re = mpf_class(z.re.get_num(), prec) / mpf_class(z.re.get_den(), prec);
    target.im = mpf_class(z.im.get_num(), prec) / mpf_class(z.im.get_den(), prec);

    for (int iter = 0; iter < 64; ++iter) {
        MpfComplex wk1 = mpfc_pow(w, k - 1);
        MpfComplex wk = mpfc_mul(wk1, w);
        MpfComplex num{mpf_class(wk.re - target.re), mpf_class(wk.im - target.im)};
        MpfComplex den{mpf_class(k * wk1.re), mpf_class(k * wk1.im)};
        MpfComplex step = mpfc_div(num, den);
        w.re -= step.re;
        w.im -= step.im;
    }

    mpz_class bound = (mpz_class(1) << 72);
    // denominators of the root divide a k-th root of the input denominators;
    // the continued-fraction bound just has to be generous
    GaussianRational cand{rationalize(w.re, bound), rationalize(w.im, bound)};
    if (gaussian_pow_equals(cand, k, z)) return Scalar::gaussian(cand.re, cand.im);
    return std::nullopt;
}

}  // namespace

std::optional<Scalar> Scalar::nth_root(const Scalar& a, int k) {
    if (k < 1) throw Error("nth_root: order must be positive");
    if (a.is_zero()) throw Error("nth_root: zero input");
    if (k == 1) return a;
    switch (a.kind()) {
        case Kind::Q: {
            auto r = exact_root_mpq(a.rational_value(), k);
            if (!r) return std::nullopt;
            return rational(*r);
        }
        case Kind::Qi: return gaussian_nth_root(a.gaussian_value(), k);
        case Kind::R64: {
            double x = a.real_value();
            if (x > 0) return real(std::pow(x, 1.0 / k));
            if (k % 2 == 1) return real(-std::pow(-x, 1.0 / k));
            return std::nullopt;
        }
        case Kind::C64: {
            return cplx(std::pow(a.complex_value(), 1.0 / static_cast<double>(k)));
        }
    }
    throw Error("bad kind");
}

}  // namespace multiform
