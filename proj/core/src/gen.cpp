#include "multiform/gen.hpp"

#include <algorithm>
#include <cmath>

#include "multiform/selfadjoint.hpp"

namespace multiform {

std::uint64_t SplitMix64::next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double SplitMix64::next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

long SplitMix64::next_int(long lo, long hi) {
    if (hi < lo) throw Error("empty range");
    return lo + static_cast<long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
}

SplitMix64 SplitMix64::split() { return SplitMix64(next()); }

namespace {

constexpr int kRetryBudget = 64;

LinearMap random_unimodular(SplitMix64& rng, int m, Kind kind) {
    LinearMap u = LinearMap::identity(m, kind);
    if (m <= 1) return u;
    int rounds = m + 2;
    for (int r = 0; r < rounds; ++r) {
        int i = static_cast<int>(rng.next_int(0, m - 1));
        int j = static_cast<int>(rng.next_int(0, m - 2));
        if (j >= i) ++j;
        Scalar c = Scalar::from_int(rng.next_bool() ? 1 : -1, kind);
        for (int col = 0; col < m; ++col) u.at(i, col) = u.at(i, col) + c * u.at(j, col);
        if (rng.next_bool()) {
            int a = static_cast<int>(rng.next_int(0, m - 1));
            int b = static_cast<int>(rng.next_int(0, m - 1));
            if (a != b)
                for (int col = 0; col < m; ++col) std::swap(u.at(a, col), u.at(b, col));
        }
    }
    return u;
}

Scalar menu_entry(SplitMix64& rng, Kind kind) {
    return Scalar::from_int(rng.next_int(-2, 3), kind);
}

bool connected_and_nonzero(const MultiForm& f, const TolerancePolicy& pol) {
    if (f.dim() == 0) return false;
    Decomposition d = support_blocks(f, pol);
    return d.blocks.size() == 1 && d.radical_basis.cols() == 0;
}

MultiForm random_dense_block(SplitMix64& rng, int arity, int dim, Kind kind,
                             const TolerancePolicy& pol, bool need_indecomposable) {
    for (int attempt = 0; attempt < kRetryBudget; ++attempt) {
        MultiForm f(arity, dim, kind);
        for (std::size_t i = 0; i < f.size(); ++i) f.at_flat(i) = menu_entry(rng, kind);
        if (!connected_and_nonzero(f, pol)) continue;
        if (need_indecomposable && !certify_indecomposable_by_slices(f, pol)) continue;
        return f;
    }
    throw SingularDraw("could not draw a usable dense block");
}

// Real form on R^{2k} carried by a complex k-dim multilinear form: the real
// part of a C-multilinear map is selfadjoint under multiplication by any
// complex scalar, which realifies to rotation-scaling blocks.
MultiForm random_pair_block(SplitMix64& rng, int arity, int dim2k, Kind kind,
                            const TolerancePolicy& pol) {
    const int k = dim2k / 2;
    Kind ck = complexification(kind);
    for (int attempt = 0; attempt < kRetryBudget; ++attempt) {
        MultiForm cm(arity, k, ck);
        bool nonzero = false;
        for (std::size_t i = 0; i < cm.size(); ++i) {
            Scalar re = menu_entry(rng, Kind::Q), im = menu_entry(rng, Kind::Q);
            cm.at_flat(i) = ck == Kind::Qi
                                ? Scalar::gaussian(re.rational_value(), im.rational_value())
                                : Scalar::cplx({re.rational_value().get_d(), im.rational_value().get_d()});
            if (!cm.at_flat(i).is_zero()) nonzero = true;
        }
        if (!nonzero) continue;
        MultiForm f(arity, dim2k, kind);
        std::vector<int> idx(static_cast<std::size_t>(arity), 0);
        std::vector<int> jdx(static_cast<std::size_t>(arity), 0);
        do {
            int phase = 0;
            for (std::size_t s = 0; s < idx.size(); ++s) {
                jdx[s] = idx[s] / 2;
                phase += idx[s] % 2;
            }
            Scalar z = cm.at(jdx);
            Scalar re = z.real_part(), im = z.imag_part();
            switch (phase % 4) {
                case 0: f.at(idx) = re.convert_to(kind); break;
                case 1: f.at(idx) = (-im).convert_to(kind); break;
                case 2: f.at(idx) = (-re).convert_to(kind); break;
                default: f.at(idx) = im.convert_to(kind); break;
            }
        } while (next_index(idx, dim2k));
        if (!connected_and_nonzero(f, pol)) continue;
        return f;
    }
    throw SingularDraw("could not draw a usable pair-compatible block");
}

LinearMap tau_block(const EigenvalueSpec& e, int dim, Kind kind) {
    if (!e.pair) {
        LinearMap t = LinearMap::identity(dim, kind);
        return t.scaled(e.a);
    }
    LinearMap t = LinearMap::zeros(dim, dim, kind);
    for (int j = 0; j + 1 < dim; j += 2) {
        t.at(j, j) = e.a;
        t.at(j, j + 1) = e.b;
        t.at(j + 1, j) = -e.b;
        t.at(j + 1, j + 1) = e.a;
    }
    return t;
}

void validate_gen_spec(const GenSpec& spec, bool witness_mode) {
    if (spec.arity < 2) throw Error("arity must be at least 2");
    for (int d : spec.block_dims)
        if (d <= 0) throw Error("block dimensions must be positive");
    if (!witness_mode) return;
    if (spec.block_dims.size() != spec.eigenvalues.size())
        throw Error("one eigenvalue group per block required");
    for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i) {
        const auto& e = spec.eigenvalues[i];
        if (e.pair) {
            if (is_complex(spec.kind)) throw Error("pair groups belong to real kinds");
            if (spec.block_dims[i] % 2 != 0) throw Error("pair blocks need even dimension");
            if (e.b.abs_approx() <= 0) throw Error("pair imaginary part must be positive");
        } else if (e.a.is_zero()) {
            throw Error("eigenvalues must be nonzero");
        }
    }
    for (std::size_t i = 0; i < spec.eigenvalues.size(); ++i)
        for (std::size_t j = i + 1; j < spec.eigenvalues.size(); ++j) {
            const auto& x = spec.eigenvalues[i];
            const auto& y = spec.eigenvalues[j];
            if (x.pair == y.pair && x.a == y.a && (!x.pair || x.b == y.b))
                throw Error("eigenvalue groups must be pairwise distinct");
        }
}

struct HiddenStructure {
    MultiForm target;   // G in the construction basis
    LinearMap tau;      // selfadjoint by construction
};

HiddenStructure build_hidden(SplitMix64& rng, const GenSpec& spec, const TolerancePolicy& pol) {
    MultiForm g(spec.arity, 0, spec.kind);
    std::vector<LinearMap> tau_blocks;
    for (std::size_t b = 0; b < spec.block_dims.size(); ++b) {
        int d = spec.block_dims[b];
        const auto& e = spec.eigenvalues[b];
        MultiForm blk = e.pair ? random_pair_block(rng, spec.arity, d, spec.kind, pol)
                               : random_dense_block(rng, spec.arity, d, spec.kind, pol, false);
        g = direct_sum(g, blk);
        tau_blocks.push_back(tau_block(e, d, spec.kind));
    }
    int m = g.dim();
    LinearMap tau = LinearMap::zeros(m, m, spec.kind);
    int off = 0;
    for (const auto& tb : tau_blocks) {
        tau.set_block(off, off, tb);
        off += tb.rows();
    }
    return {std::move(g), std::move(tau)};
}

}  // namespace

Witness gen_witness(const GenSpec& spec) {
    validate_gen_spec(spec, true);
    TolerancePolicy pol;
    SplitMix64 rng(spec.seed);
    const int n = spec.arity;

    bool needs_structured_exponents = false;
    if (!is_complex(spec.kind)) {
        for (const auto& e : spec.eigenvalues) {
            bool negative = !e.pair && (spec.kind == Kind::Q ? e.a.rational_value() < 0
                                                             : e.a.real_value() < 0);
            if (e.pair || negative) needs_structured_exponents = true;
        }
    }

    for (int attempt = 0; attempt < kRetryBudget; ++attempt) {
        SplitMix64 draw = rng.split();
        HiddenStructure h = build_hidden(draw, spec, pol);
        const int m = h.target.dim();

        std::vector<long> exponents(static_cast<std::size_t>(n), 0);
        if (needs_structured_exponents) {
            // equal exponents up to an odd offset on the last map: real powers
            // keep their sign pattern and pairs never land on the real axis,
            // so negative menu entries surface exactly once, at the last round
            long c = draw.next_int(0, 2);
            long e = draw.next_bool() ? 1 : 3;
            for (int k = 0; k < n; ++k) exponents[static_cast<std::size_t>(k)] = c;
            exponents[static_cast<std::size_t>(n - 1)] = c - e;
        } else {
            for (int k = 0; k < n; ++k) exponents[static_cast<std::size_t>(k)] = draw.next_int(0, 3);
        }

        LinearMap phi = random_unimodular(draw, m, spec.kind);
        Witness w;
        w.target = h.target;
        w.maps.reserve(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k)
            w.maps.push_back(pow_int(h.tau, exponents[static_cast<std::size_t>(k)], pol) * phi);
        w.source = pullback(w.target, w.maps);

        if (spec.conjugate) {
            LinearMap c = random_unimodular(draw, m, spec.kind);
            LinearMap d = random_unimodular(draw, m, spec.kind);
            LinearMap d_inv = inverse(d, pol);
            w.source = change_basis(w.source, c);
            w.target = change_basis(w.target, d);
            for (auto& mp : w.maps) mp = d_inv * mp * c;
        }

        WitnessReport rep = check_witness(w, pol);
        if (rep.ok) return w;
    }
    throw SingularDraw("witness generation failed its own check repeatedly");
}

SelfadjointPair gen_selfadjoint_pair(const GenSpec& spec) {
    validate_gen_spec(spec, true);
    TolerancePolicy pol;
    SplitMix64 rng(spec.seed);
    for (int attempt = 0; attempt < kRetryBudget; ++attempt) {
        SplitMix64 draw = rng.split();
        HiddenStructure h = build_hidden(draw, spec, pol);
        MultiForm g = h.target;
        LinearMap tau = h.tau;
        if (spec.conjugate) {
            LinearMap c = random_unimodular(draw, g.dim(), spec.kind);
            g = change_basis(g, c);
            tau = inverse(c, pol) * tau * c;
        }
        if (is_selfadjoint(g, tau, pol).ok) return {std::move(g), std::move(tau)};
    }
    throw SingularDraw("selfadjoint pair generation failed its own check repeatedly");
}

DecomposableInstance gen_decomposable(const GenSpec& spec) {
    validate_gen_spec(spec, false);
    TolerancePolicy pol;
    SplitMix64 rng(spec.seed);
    const int s = static_cast<int>(spec.block_dims.size());
    const int k = spec.radical_dim;

    for (int attempt = 0; attempt < kRetryBudget; ++attempt) {
        SplitMix64 draw = rng.split();
        MultiForm f(spec.arity, 0, spec.kind);
        for (int b = 0; b < s; ++b)
            f = direct_sum(f, random_dense_block(draw, spec.arity, spec.block_dims[static_cast<std::size_t>(b)],
                                                 spec.kind, pol, true));
        f = direct_sum(f, MultiForm(spec.arity, k, spec.kind));
        const int m = f.dim();

        Decomposition d1;
        d1.dim = m;
        d1.kind = spec.kind;
        int off = 0;
        for (int b = 0; b < s; ++b) {
            int d = spec.block_dims[static_cast<std::size_t>(b)];
            LinearMap basis(m, d, spec.kind);
            for (int c = 0; c < d; ++c) basis.at(off + c, c) = Scalar::one(spec.kind);
            d1.blocks.push_back(std::move(basis));
            off += d;
        }
        d1.radical_basis = LinearMap(m, k, spec.kind);
        for (int c = 0; c < k; ++c) d1.radical_basis.at(off + c, c) = Scalar::one(spec.kind);

        std::vector<int> hidden(static_cast<std::size_t>(s));
        for (int i = 0; i < s; ++i) hidden[static_cast<std::size_t>(i)] = i;
        for (int i = s - 1; i > 0; --i)
            std::swap(hidden[static_cast<std::size_t>(i)],
                      hidden[static_cast<std::size_t>(draw.next_int(0, i))]);

        Decomposition d2;
        d2.dim = m;
        d2.kind = spec.kind;
        d2.blocks.assign(static_cast<std::size_t>(s), LinearMap());
        for (int b = 0; b < s; ++b) {
            int d = spec.block_dims[static_cast<std::size_t>(b)];
            LinearMap w = random_unimodular(draw, d, spec.kind);
            LinearMap basis = d1.blocks[static_cast<std::size_t>(b)] * w;
            if (k > 0) {
                LinearMap shear(k, d, spec.kind);
                for (int i = 0; i < k; ++i)
                    for (int j = 0; j < d; ++j)
                        shear.at(i, j) = Scalar::from_int(draw.next_int(-1, 1), spec.kind);
                basis = basis + d1.radical_basis * shear;
            }
            d2.blocks[static_cast<std::size_t>(hidden[static_cast<std::size_t>(b)])] = std::move(basis);
        }
        d2.radical_basis = k > 0 ? d1.radical_basis * random_unimodular(draw, k, spec.kind)
                                 : LinearMap(m, 0, spec.kind);

        try {
            validate_decomposition(f, d1, pol, true);
            validate_decomposition(f, d2, pol, true);
        } catch (const Error&) {
            continue;
        }
        return {std::move(f), std::move(d1), std::move(d2), std::move(hidden)};
    }
    throw SingularDraw("decomposable instance generation failed validation repeatedly");
}

}  // namespace multiform
