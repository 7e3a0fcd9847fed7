#include "multiform/spectral.hpp"

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <optional>

namespace multiform {

namespace {

// ---------- exact candidate machinery ----------

struct Factorization {
    std::map<mpz_class, int> primes;
    bool complete = true;
};

Factorization factor_with_budget(mpz_class n) {
    Factorization f;
    if (n < 0) n = -n;
    if (n <= 1) return f;
    for (mpz_class p = 2; p <= 1000000; p == 2 ? p = 3 : p += 2) {
        if (p * p > n) break;
        while (n % p == 0) {
            ++f.primes[p];
            n /= p;
        }
    }
    if (n > 1) {
        if (mpz_probab_prime_p(n.get_mpz_t(), 30) != 0) {
            ++f.primes[n];
        } else {
            f.complete = false;  // composite beyond the trial budget
        }
    }
    return f;
}

std::optional<std::vector<mpz_class>> divisors_capped(const mpz_class& n, std::size_t cap) {
    Factorization f = factor_with_budget(n);
    if (!f.complete) return std::nullopt;
    std::vector<mpz_class> divs{1};
    for (const auto& [p, e] : f.primes) {
        std::vector<mpz_class> next;
        next.reserve(divs.size() * static_cast<std::size_t>(e + 1));
        mpz_class pk = 1;
        for (int i = 0; i <= e; ++i) {
            for (const auto& d : divs) next.push_back(d * pk);
            pk *= p;
        }
        if (next.size() > cap) return std::nullopt;
        divs = std::move(next);
    }
    std::sort(divs.begin(), divs.end());
    return divs;
}

// Best rational approximation of a double with bounded denominator; the
// caller verifies candidates exactly, so a miss is harmless.
std::optional<mpq_class> rationalize_double(double x, double max_plausible = 1e30) {
    if (!std::isfinite(x) || std::fabs(x) > max_plausible) return std::nullopt;
    if (std::fabs(x) < 9.0e15) {
        double r = std::round(x);
        if (std::fabs(x - r) <= 1e-9 * std::max(1.0, std::fabs(x))) return mpq_class(mpz_class(r));
    }
    mpz_class h1 = 1, h0 = 0, k1 = 0, k0 = 1;
    const mpz_class bound = mpz_class(1) << 40;
    double v = x;
    for (int iter = 0; iter < 64; ++iter) {
        double fl = std::floor(v);
        if (std::fabs(fl) > 9.0e15) break;
        mpz_class a(fl);
        mpz_class h = a * h1 + h0;
        mpz_class k = a * k1 + k0;
        if (k > bound) break;
        h0 = h1;
        h1 = h;
        k0 = k1;
        k1 = k;
        double frac = v - fl;
        if (frac < 1e-13) break;
        v = 1.0 / frac;
    }
    if (k1 == 0) return std::nullopt;
    mpq_class q(h1, k1);
    q.canonicalize();
    return q;
}

// Division of an exact polynomial by a monic divisor.
std::pair<Poly, Poly> divmod_monic(const Poly& a, const Poly& d) {
    int dd = d.degree();
    if (dd < 0) throw Error("division by zero polynomial");
    std::vector<Scalar> rem;
    for (int i = 0; i <= a.degree(); ++i) rem.push_back(a.coeff(i));
    std::vector<Scalar> quot(
        static_cast<std::size_t>(std::max(0, a.degree() - dd + 1)), Scalar::zero(a.kind()));
    for (int i = a.degree(); i >= dd; --i) {
        Scalar q = rem[static_cast<std::size_t>(i)];
        if (!q.is_zero()) {
            quot[static_cast<std::size_t>(i - dd)] = q;
            for (int j = 0; j <= dd; ++j)
                rem[static_cast<std::size_t>(i - dd + j)] =
                    rem[static_cast<std::size_t>(i - dd + j)] - q * d.coeff(j);
        }
        rem.pop_back();
    }
    Poly qq(a.kind()), rr(a.kind());
    if (!quot.empty()) qq = Poly::from_coeffs(std::move(quot));
    if (!rem.empty()) rr = Poly::from_coeffs(std::move(rem));
    return {qq, rr};
}

int deflate_root(Poly& work, const Scalar& root) {
    int mult = 0;
    std::vector<Scalar> lin{-root, Scalar::one(work.kind())};
    Poly linear = Poly::from_coeffs(lin);
    while (work.degree() > 0 && work.eval(root).is_zero()) {
        auto [q, r] = divmod_monic(work, linear);
        if (r.degree() >= 0) break;  // float dust guard; unreachable for exact
        work = q;
        ++mult;
    }
    return mult;
}

mpz_class scale_to_integers(const Poly& p, std::vector<mpz_class>& coeffs) {
    // exact rational coefficients only
    mpz_class lcm_den = 1;
    for (int i = 0; i <= p.degree(); ++i) {
        mpz_class den = p.coeff(i).rational_value().get_den();
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), lcm_den.get_mpz_t(), den.get_mpz_t());
        lcm_den = lcm_den / g * den;
    }
    coeffs.clear();
    for (int i = 0; i <= p.degree(); ++i) {
        mpq_class scaled = p.coeff(i).rational_value() * mpq_class(lcm_den);
        coeffs.push_back(mpz_class(scaled.get_num()));
    }
    return lcm_den;
}

// Rational-root candidates by divisor enumeration, filtered by a Cauchy
// root bound. Gaussian-coefficient polynomials use divisors of the norm of
// the trailing coefficient, which is a superset of the valid numerators.
std::vector<mpq_class> divisor_candidates(const Poly& p) {
    std::vector<mpq_class> out;
    const bool gaussian = p.kind() == Kind::Qi;
    mpz_class trailing, leading;
    double bound = 0.0;
    if (!gaussian) {
        std::vector<mpz_class> c;
        scale_to_integers(p, c);
        trailing = c.front();
        leading = c.back();
        double lead_abs = std::fabs(mpz_class(abs(leading)).get_d());
        for (const auto& ci : c)
            bound = std::max(bound, std::fabs(ci.get_d()) / std::max(lead_abs, 1e-300));
    } else {
        // scale both components, take norms
        mpz_class lcm_den = 1;
        for (int i = 0; i <= p.degree(); ++i) {
            const auto& g = p.coeff(i).gaussian_value();
            for (const mpz_class den : {mpz_class(g.re.get_den()), mpz_class(g.im.get_den())}) {
                mpz_class gg;
                mpz_gcd(gg.get_mpz_t(), lcm_den.get_mpz_t(), den.get_mpz_t());
                lcm_den = lcm_den / gg * den;
            }
        }
        auto scaled_norm = [&](int i) {
            const auto& g = p.coeff(i).gaussian_value();
            mpq_class re = g.re * lcm_den, im = g.im * lcm_den;
            mpq_class n = re * re + im * im;
            return mpz_class(n.get_num());
        };
        trailing = scaled_norm(0);
        leading = scaled_norm(p.degree());
        for (int i = 0; i <= p.degree(); ++i)
            bound = std::max(bound, std::sqrt(std::fabs(scaled_norm(i).get_d())) /
                                        std::max(std::sqrt(std::fabs(leading.get_d())), 1e-300));
    }
    if (trailing == 0) return out;
    auto nums = divisors_capped(abs(trailing), 4096);
    auto dens = divisors_capped(abs(leading), 256);
    if (!nums || !dens) return out;
    bound = 1.0 + bound;
    for (const auto& nu : *nums)
        for (const auto& de : *dens) {
            mpq_class q(nu, de);
            q.canonicalize();
            if (std::fabs(q.get_d()) > bound) continue;
            out.push_back(q);
            out.push_back(mpq_class(-q));
            if (out.size() > 100000) return out;
        }
    return out;
}

std::complex<double> mean_of(const std::vector<std::complex<double>>& v) {
    std::complex<double> s{0.0, 0.0};
    for (auto z : v) s += z;
    return s / static_cast<double>(v.size());
}

struct Cluster {
    std::complex<double> center;
    int count = 0;
};

std::vector<Cluster> cluster_eigenvalues(std::vector<std::complex<double>> eigs, double cluster_rel) {
    std::vector<Cluster> clusters;
    double scale = 1.0;
    for (auto z : eigs) scale = std::max(scale, std::abs(z));
    std::vector<int> parent(eigs.size());
    for (std::size_t i = 0; i < eigs.size(); ++i) parent[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int a) { return parent[static_cast<std::size_t>(a)] == a ? a : parent[static_cast<std::size_t>(a)] = find(parent[static_cast<std::size_t>(a)]); };
    for (std::size_t i = 0; i < eigs.size(); ++i)
        for (std::size_t j = i + 1; j < eigs.size(); ++j)
            if (std::abs(eigs[i] - eigs[j]) <= cluster_rel * scale)
                parent[static_cast<std::size_t>(find(static_cast<int>(i)))] = find(static_cast<int>(j));
    std::map<int, std::vector<std::complex<double>>> buckets;
    for (std::size_t i = 0; i < eigs.size(); ++i) buckets[find(static_cast<int>(i))].push_back(eigs[i]);
    for (auto& [root, members] : buckets)
        clusters.push_back(Cluster{mean_of(members), static_cast<int>(members.size())});
    std::sort(clusters.begin(), clusters.end(), [](const Cluster& a, const Cluster& b) {
        if (a.center.real() != b.center.real()) return a.center.real() < b.center.real();
        return a.center.imag() < b.center.imag();
    });
    return clusters;
}

std::vector<std::complex<double>> float_eigenvalues(const LinearMap& t) {
    const int m = t.rows();
    Eigen::MatrixXcd a(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) a(i, j) = t.at(i, j).to_complex_double();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(a, false);
    if (es.info() != Eigen::Success) throw EigenvalueNotFound("float eigensolver did not converge");
    std::vector<std::complex<double>> out(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) out[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
    return out;
}

}  // namespace

// ---------- characteristic polynomial ----------

Poly char_poly(const LinearMap& t) {
    if (!t.is_square()) throw DimensionMismatch("characteristic polynomial of non-square matrix");
    if (!is_exact(t.kind())) throw KindMismatch("char_poly is exact-kind machinery");
    const int n = t.rows();
    Kind k = t.kind();
    std::vector<Scalar> c(static_cast<std::size_t>(n + 1), Scalar::zero(k));
    c[static_cast<std::size_t>(n)] = Scalar::one(k);
    // Faddeev-LeVerrier
    LinearMap nmat = LinearMap::zeros(n, n, k);
    for (int i = 1; i <= n; ++i) {
        nmat = t * nmat;
        Scalar prev = c[static_cast<std::size_t>(n - i + 1)];
        for (int d = 0; d < n; ++d) nmat.at(d, d) = nmat.at(d, d) + prev;
        LinearMap tn = t * nmat;
        Scalar tr = Scalar::zero(k);
        for (int d = 0; d < n; ++d) tr = tr + tn.at(d, d);
        c[static_cast<std::size_t>(n - i)] = -(tr / Scalar::from_int(i, k));
    }
    return Poly::from_coeffs(std::move(c));
}

// ---------- exact spectrum ----------

ExactSpectrum exact_spectrum(const Poly& p, bool allow_quadratics,
                             const std::vector<std::complex<double>>& float_seeds) {
    if (!is_exact(p.kind())) throw KindMismatch("exact_spectrum needs an exact-kind polynomial");
    if (p.degree() < 0) throw Error("zero polynomial has no spectrum");
    if (!p.coeff(p.degree()).is_one()) throw Error("exact_spectrum expects a monic polynomial");
    ExactSpectrum spec;
    Poly work = p;
    Kind k = p.kind();

    auto try_root = [&](const Scalar& cand) {
        if (work.degree() <= 0) return;
        int mult = deflate_root(work, cand);
        if (mult > 0) spec.roots.push_back(RootMultiplicity{cand, mult});
    };

    // zero roots first
    if (work.degree() > 0 && work.coeff(0).is_zero()) try_root(Scalar::zero(k));

    // float-seeded candidates, verified exactly
    for (auto z : float_seeds) {
        if (work.degree() <= 0) break;
        auto re = rationalize_double(z.real());
        auto im = rationalize_double(z.imag());
        if (!re) continue;
        if (k == Kind::Q) {
            try_root(Scalar::rational(*re));
        } else {
            if (!im) continue;
            try_root(Scalar::gaussian(*re, *im));
        }
    }

    // divisor enumeration on whatever is left
    if (work.degree() > 0) {
        for (const auto& cand : divisor_candidates(work)) {
            if (work.degree() <= 0) break;
            try_root(k == Kind::Q ? Scalar::rational(cand) : Scalar::gaussian(cand, mpq_class(0)));
        }
    }

    // conjugate pairs as rational quadratics x^2 - trace x + norm with
    // negative discriminant, seeded from the float spectrum
    if (allow_quadratics && k == Kind::Q) {
        for (auto z : float_seeds) {
            if (work.degree() < 2) break;
            if (z.imag() <= 0) continue;
            auto trace = rationalize_double(2.0 * z.real());
            auto norm = rationalize_double(std::norm(z));
            if (!trace || !norm) continue;
            // discriminant must be negative: a genuine conjugate pair
            if (*trace * *trace >= 4 * *norm) continue;
            Poly quad = Poly::from_coeffs(
                {Scalar::rational(*norm), Scalar::rational(-*trace), Scalar::one(k)});
            int mult = 0;
            while (work.degree() >= 2) {
                auto [q, r] = divmod_monic(work, quad);
                if (r.degree() >= 0) break;
                work = q;
                ++mult;
            }
            if (mult > 0)
                spec.quadratics.push_back(
                    QuadraticFactor{Scalar::rational(*trace), Scalar::rational(*norm), mult});
        }
    }

    spec.complete = work.degree() == 0;
    return spec;
}

// ---------- spectral split ----------

namespace {

SpectralGroup make_group(const LinearMap& t, const LinearMap& annihilator_power, bool pair,
                         const Scalar& a, const Scalar& b_squared, double b_approx, int mult,
                         const SpectralOptions& opt, bool exact) {
    SpectralGroup g;
    g.pair = pair;
    g.a = a;
    g.b_squared = b_squared;
    g.b_approx = b_approx;
    g.multiplicity = mult;
    g.basis = kernel_basis(annihilator_power, opt.pol, exact ? -1 : mult);
    if (g.basis.cols() != mult)
        throw EigenvalueNotFound("invariant subspace dimension disagrees with multiplicity");
    double residual = 0.0;
    g.restriction = solve_consistent(g.basis, t * g.basis, opt.pol, &residual);
    double scale = std::max(1.0, t.inf_norm()) * std::max(1.0, g.basis.max_abs());
    if (exact) {
        if (residual != 0.0) throw EigenvalueNotFound("subspace not invariant");
    } else if (residual > 1e-6 * scale) {
        throw NumericalInstability("invariant subspace residual too large");
    }
    return g;
}

LinearMap shifted_power(const LinearMap& t, const Scalar& lambda, int e, const TolerancePolicy& pol) {
    LinearMap s = t;
    for (int i = 0; i < t.rows(); ++i) s.at(i, i) = s.at(i, i) - lambda;
    return pow_int(s, e, pol);
}

LinearMap quadratic_power(const LinearMap& t, const Scalar& trace, const Scalar& norm, int e,
                          const TolerancePolicy& pol) {
    LinearMap s = t * t - t.scaled(trace);
    for (int i = 0; i < t.rows(); ++i) s.at(i, i) = s.at(i, i) + norm;
    return pow_int(s, e, pol);
}

}  // namespace

SpectralSplit spectral_split(const LinearMap& t_in, SplitMode mode, const SpectralOptions& opt) {
    if (!t_in.is_square()) throw DimensionMismatch("spectral split of non-square matrix");
    if (mode == SplitMode::Real && is_complex(t_in.kind()))
        throw KindMismatch("real split of a complex-kind matrix");
    LinearMap t = mode == SplitMode::Complex && !is_complex(t_in.kind())
                      ? t_in.convert_to(complexification(t_in.kind()))
                      : t_in;
    SpectralSplit split;
    split.kind = t.kind();
    split.dim = t.rows();
    if (t.rows() == 0) return split;

    std::vector<std::complex<double>> eigs = float_eigenvalues(t);
    std::vector<Cluster> clusters = cluster_eigenvalues(eigs, opt.cluster_rel);
    double scale = 1.0;
    for (auto z : eigs) scale = std::max(scale, std::abs(z));

    if (is_exact(t.kind())) {
        Poly p = char_poly(t);
        std::vector<std::complex<double>> seeds;
        for (const auto& c : clusters) seeds.push_back(c.center);
        ExactSpectrum spec = exact_spectrum(p, mode == SplitMode::Real, seeds);
        if (!spec.complete)
            throw EigenvalueNotFound("characteristic polynomial does not split over the exact field");
        int total = 0;
        for (const auto& r : spec.roots) {
            LinearMap ann = shifted_power(t, r.value, r.multiplicity, opt.pol);
            split.groups.push_back(make_group(t, ann, false, r.value, Scalar::zero(t.kind()), 0.0,
                                              r.multiplicity, opt, true));
            total += r.multiplicity;
        }
        for (const auto& q : spec.quadratics) {
            Scalar a = q.trace / Scalar::from_int(2, t.kind());
            Scalar b2 = q.norm - a * a;
            LinearMap ann = quadratic_power(t, q.trace, q.norm, q.multiplicity, opt.pol);
            split.groups.push_back(make_group(t, ann, true, a, b2, std::sqrt(b2.abs_approx()),
                                              2 * q.multiplicity, opt, true));
            total += 2 * q.multiplicity;
        }
        if (total != t.rows()) throw EigenvalueNotFound("spectrum does not account for the dimension");
    } else if (mode == SplitMode::Complex) {
        for (const auto& c : clusters) {
            Scalar lambda = Scalar::cplx(c.center);
            LinearMap ann = shifted_power(t, lambda, c.count, opt.pol);
            split.groups.push_back(make_group(t, ann, false, lambda, Scalar::zero(t.kind()), 0.0,
                                              c.count, opt, false));
        }
    } else {
        // float real mode: peel real clusters, pair the rest with conjugates
        double imag_tol = opt.cluster_rel * scale;
        std::vector<bool> used(clusters.size(), false);
        for (std::size_t i = 0; i < clusters.size(); ++i) {
            if (used[i]) continue;
            const Cluster& c = clusters[i];
            if (std::fabs(c.center.imag()) <= imag_tol) {
                used[i] = true;
                Scalar lambda = Scalar::real(c.center.real());
                LinearMap ann = shifted_power(t, lambda, c.count, opt.pol);
                split.groups.push_back(make_group(t, ann, false, lambda, Scalar::real(0.0), 0.0,
                                                  c.count, opt, false));
                continue;
            }
            if (c.center.imag() < 0) continue;  // consumed with its partner
            // find the conjugate cluster
            std::size_t partner = clusters.size();
            double best = 1e300;
            for (std::size_t j = 0; j < clusters.size(); ++j) {
                if (j == i || used[j]) continue;
                double d = std::abs(clusters[j].center - std::conj(c.center));
                if (d < best) {
                    best = d;
                    partner = j;
                }
            }
            if (partner == clusters.size() || best > 2 * imag_tol * std::max(1.0, std::abs(c.center)) ||
                clusters[partner].count != c.count)
                throw NumericalInstability("conjugate eigenvalue cluster not found for a real matrix");
            used[i] = used[partner] = true;
            double a = 0.5 * (c.center.real() + clusters[partner].center.real());
            double b = 0.5 * (c.center.imag() - clusters[partner].center.imag());
            Scalar trace = Scalar::real(2 * a);
            Scalar norm = Scalar::real(a * a + b * b);
            LinearMap ann = quadratic_power(t, trace, norm, c.count, opt.pol);
            split.groups.push_back(make_group(t, ann, true, Scalar::real(a), Scalar::real(b * b), b,
                                              2 * c.count, opt, false));
        }
        int total = 0;
        for (const auto& g : split.groups) total += g.multiplicity;
        if (total != t.rows()) throw NumericalInstability("real spectral split lost dimensions");
    }

    std::sort(split.groups.begin(), split.groups.end(), [](const SpectralGroup& x, const SpectralGroup& y) {
        double ax = x.a.abs_approx(), ay = y.a.abs_approx();
        std::complex<double> cx = x.a.to_complex_double(), cy = y.a.to_complex_double();
        if (cx.real() != cy.real()) return cx.real() < cy.real();
        if (cx.imag() != cy.imag()) return cx.imag() < cy.imag();
        if (x.b_approx != y.b_approx) return x.b_approx < y.b_approx;
        return ax < ay;
    });
    return split;
}

// ---------- inverse root polynomials ----------

namespace {

// Binomial series of x^(-1/m) around lambda, truncated to `terms` terms.
Poly taylor_inverse_root(const Scalar& lambda, int m, int terms) {
    Kind k = lambda.kind();
    if (lambda.is_zero()) throw SingularMatrix("inverse root at zero eigenvalue");
    auto root = Scalar::nth_root(lambda, m);
    if (!root) {
        if (is_exact(k)) throw NoRootInField("eigenvalue has no exact m-th root");
        throw NegativeRealEigenvalue("negative real eigenvalue reached the root extraction");
    }
    Scalar r = root->inverse();  // lambda^(-1/m)
    Scalar alpha = Scalar::from_int(-1, k) / Scalar::from_int(m, k);
    Scalar lam_inv = lambda.inverse();
    std::vector<Scalar> coef;
    coef.reserve(static_cast<std::size_t>(terms));
    Scalar binom = Scalar::one(k);
    Scalar lam_pow = Scalar::one(k);  // lambda^(-j)
    coef.push_back(r);
    for (int j = 1; j < terms; ++j) {
        binom = binom * (alpha - Scalar::from_int(j - 1, k)) / Scalar::from_int(j, k);
        lam_pow = lam_pow * lam_inv;
        coef.push_back(binom * r * lam_pow);
    }
    // expand sum coef_j (x - lambda)^j to the monomial basis
    Poly shift = Poly::from_coeffs({-lambda, Scalar::one(k)});
    Poly f(k);
    for (int j = terms - 1; j >= 0; --j) {
        f = f * shift;
        f = f + Poly::constant(coef[static_cast<std::size_t>(j)]);
    }
    return f;
}

}  // namespace

Poly inverse_root_poly_complex(const LinearMap& t, const Scalar& lambda, int m) {
    if (!t.is_square()) throw DimensionMismatch("inverse root of non-square matrix");
    if (lambda.kind() != t.kind()) throw KindMismatch("eigenvalue kind mismatch");
    if (m < 1) throw Error("root order must be positive");
    int terms = std::max(1, t.rows());
    return taylor_inverse_root(lambda, m, terms);
}

Poly inverse_root_poly_real(const LinearMap& t, const SpectralGroup& group, int m, int* rounds_out) {
    if (!t.is_square()) throw DimensionMismatch("inverse root of non-square matrix");
    if (is_complex(t.kind())) throw KindMismatch("real inverse root of a complex-kind matrix");
    if (m < 1) throw Error("root order must be positive");
    Kind k = t.kind();
    if (rounds_out) *rounds_out = 0;

    if (!group.pair) {
        const Scalar& lambda = group.a;
        bool negative = k == Kind::Q ? lambda.rational_value() < 0 : lambda.real_value() < 0;
        if (negative)
            throw NegativeRealEigenvalue("apply the sign map before extracting real roots");
        return inverse_root_poly_complex(t, lambda, m);
    }

    const int d = t.rows();
    if (d % 2 != 0) throw DimensionMismatch("conjugate-pair block must have even dimension");
    const int kk = d / 2;

    Kind ck = complexification(k);
    Scalar b;
    if (is_exact(k)) {
        auto br = Scalar::nth_root(group.b_squared, 2);
        if (!br) throw NoRootInField("imaginary part of the pair is not in the field");
        b = *br;
        if (b.rational_value() < 0) b = -b;
    } else {
        b = Scalar::real(std::sqrt(group.b_squared.real_value()));
    }
    Scalar lambda_c = is_exact(k)
                          ? Scalar::gaussian(group.a.rational_value(), b.rational_value())
                          : Scalar::cplx({group.a.real_value(), b.real_value()});

    Poly g = taylor_inverse_root(lambda_c, m, kk);
    auto [g0, g1] = g.split_real_imag();

    // annihilator (x^2 - 2a x + (a^2+b^2))^kk
    Scalar trace = group.a + group.a;
    Scalar norm = group.a * group.a + group.b_squared;
    Poly qbase = Poly::from_coeffs({norm, -trace, Scalar::one(k)});
    Poly qk = Poly::constant(Scalar::one(k));
    for (int i = 0; i < kk; ++i) qk = qk * qbase;

    // p with p(T)^2 = -I, starting from the affine shift (x - a)/b
    Scalar binv = b.inverse();
    Poly p = Poly::from_coeffs({-group.a * binv, binv});
    const int cap = static_cast<int>(std::ceil(std::log2(std::max(1, kk)))) + 2;
    int rounds = 0;
    LinearMap eye = LinearMap::identity(d, k);
    double best_residual = 1e300;
    for (;;) {
        LinearMap pm = poly_apply(p, t);
        LinearMap res = pm * pm + eye;
        double residual = res.max_abs();
        bool done = is_exact(k) ? residual == 0.0
                                : residual <= 1e-12 * std::max(1.0, pm.inf_norm() * pm.inf_norm());
        if (done) break;
        if (rounds >= cap) {
            if (is_exact(k)) throw Error("nilpotent reduction failed to terminate");
            if (residual > 1e-7 * std::max(1.0, pm.inf_norm() * pm.inf_norm()))
                throw NumericalInstability("nilpotent reduction stalled");
            break;
        }
        best_residual = std::min(best_residual, residual);
        Poly p3 = p * p * p;
        Scalar half = Scalar::one(k) / Scalar::from_int(2, k);
        Scalar three_half = Scalar::from_int(3, k) * half;
        p = p.scaled(three_half) + p3.scaled(half);
        p = p.mod_monic(qk);
        ++rounds;
    }
    if (rounds_out) *rounds_out = rounds;

    Poly f = g0 + p * g1;
    return f.mod_monic(qk);
}

}  // namespace multiform
