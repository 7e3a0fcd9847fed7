#include "multiform/selfadjoint.hpp"

#include <algorithm>
#include <cmath>

namespace multiform {

SelfadjointReport is_selfadjoint(const MultiForm& g, const LinearMap& tau,
                                 const TolerancePolicy& pol, bool all_pairs) {
    if (!tau.is_square() || tau.rows() != g.dim())
        throw DimensionMismatch("selfadjointness check shape mismatch");
    if (tau.kind() != g.kind()) throw KindMismatch("selfadjointness check kind mismatch");
    SelfadjointReport rep;
    const int n = g.arity();
    std::vector<MultiForm> contracted;
    contracted.reserve(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) contracted.push_back(contract_slot(g, s, tau));
    for (int i = 0; i < (all_pairs ? n : 1); ++i) {
        for (int j = i + 1; j < n; ++j) {
            rep.max_residual = std::max(
                rep.max_residual, max_abs_diff(contracted[static_cast<std::size_t>(i)],
                                               contracted[static_cast<std::size_t>(j)]));
            if (!approx_eq(contracted[static_cast<std::size_t>(i)],
                           contracted[static_cast<std::size_t>(j)], pol)) {
                for (std::size_t f = 0; f < g.size(); ++f) {
                    if (!Scalar::approx_eq(contracted[static_cast<std::size_t>(i)].at_flat(f),
                                           contracted[static_cast<std::size_t>(j)].at_flat(f), pol)) {
                        rep.index = g.unflatten(f);
                        break;
                    }
                }
                rep.slot_a = i;
                rep.slot_b = j;
                rep.ok = false;
                return rep;
            }
        }
    }
    rep.ok = true;
    return rep;
}

bool polynomial_closure(const MultiForm& g, const LinearMap& tau, const Poly& f,
                        const TolerancePolicy& pol) {
    return is_selfadjoint(g, poly_apply(f, tau), pol).ok;
}

Decomposition direct_sum_from_split(const MultiForm& g, const SpectralSplit& split,
                                    const TolerancePolicy& pol, double* max_mixed_out) {
    std::vector<LinearMap> bases;
    bases.reserve(split.groups.size());
    int total = 0;
    for (const auto& grp : split.groups) {
        bases.push_back(grp.basis);
        total += grp.basis.cols();
    }
    if (total != g.dim()) throw DimensionMismatch("spectral split does not span the space");
    Decomposition dec;
    dec.dim = g.dim();
    dec.kind = g.kind();
    dec.radical_basis = LinearMap::zeros(g.dim(), 0, g.kind());
    if (split.groups.empty()) return dec;

    LinearMap adapted = LinearMap::hstack(bases);
    MultiForm a = change_basis(g, adapted);

    // strip of each coordinate index
    std::vector<int> strip(static_cast<std::size_t>(g.dim()), 0);
    int offset = 0;
    for (std::size_t grp = 0; grp < bases.size(); ++grp) {
        for (int c = 0; c < bases[grp].cols(); ++c) strip[static_cast<std::size_t>(offset + c)] = static_cast<int>(grp);
        offset += bases[grp].cols();
    }

    double threshold = pol.abs + pol.rel * std::max(1.0, a.max_abs());
    double max_mixed = 0.0;
    std::vector<int> idx(static_cast<std::size_t>(g.arity()), 0);
    if (g.dim() > 0) {
        do {
            int s0 = strip[static_cast<std::size_t>(idx[0])];
            bool mixed = false;
            for (int v : idx)
                if (strip[static_cast<std::size_t>(v)] != s0) mixed = true;
            if (!mixed) continue;
            double mag = a.at(idx).abs_approx();
            max_mixed = std::max(max_mixed, mag);
            bool zero = is_exact(g.kind()) ? a.at(idx).is_zero() : mag <= threshold;
            if (!zero)
                throw MixedBlockNonzero("coefficient couples two spectral groups", idx);
        } while (next_index(idx, g.dim()));
    }
    if (max_mixed_out) *max_mixed_out = max_mixed;
    dec.blocks = std::move(bases);
    return dec;
}

}  // namespace multiform
