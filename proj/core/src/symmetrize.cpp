#include "multiform/symmetrize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "multiform/selfadjoint.hpp"

namespace multiform {

namespace {

void check_witness_shapes(const Witness& w) {
    const int n = w.source.arity();
    const int m = w.source.dim();
    if (w.target.arity() != n || w.target.dim() != m)
        throw DimensionMismatch("source and target forms disagree in shape");
    if (w.source.kind() != w.target.kind()) throw KindMismatch("source and target kinds differ");
    if (static_cast<int>(w.maps.size()) != n) throw DimensionMismatch("one witness map per slot required");
    for (const auto& mmap : w.maps) {
        if (mmap.rows() != m || mmap.cols() != m) throw DimensionMismatch("witness map has wrong shape");
        if (mmap.kind() != w.source.kind()) throw KindMismatch("witness map kind mismatch");
    }
}

std::vector<LinearMap> reordered_maps(const Witness& w, const std::vector<int>& order) {
    std::vector<LinearMap> ms;
    ms.reserve(order.size());
    for (int i : order) ms.push_back(w.maps[static_cast<std::size_t>(i)]);
    return ms;
}

std::optional<WitnessViolation> compare_against(const MultiForm& f, const MultiForm& pulled,
                                                const std::vector<int>& order,
                                                const TolerancePolicy& pol, double& max_residual) {
    max_residual = std::max(max_residual, max_abs_diff(f, pulled));
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!Scalar::approx_eq(f.at_flat(i), pulled.at_flat(i), pol)) {
            return WitnessViolation{order, f.unflatten(i), f.at_flat(i), pulled.at_flat(i)};
        }
    }
    return std::nullopt;
}

}  // namespace

WitnessReport check_witness(const Witness& w, const TolerancePolicy& pol, bool full_factorial) {
    check_witness_shapes(w);
    const int n = w.source.arity();
    WitnessReport rep;
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    if (n <= 4 || full_factorial) {
        do {
            MultiForm pulled = pullback(w.target, reordered_maps(w, order));
            if (auto v = compare_against(w.source, pulled, order, pol, rep.max_residual)) {
                rep.ok = false;
                rep.violation = std::move(v);
                return rep;
            }
        } while (std::next_permutation(order.begin(), order.end()));
    } else {
        // identity assignment plus each of its transpositions
        MultiForm pulled = pullback(w.target, reordered_maps(w, order));
        if (auto v = compare_against(w.source, pulled, order, pol, rep.max_residual)) {
            rep.ok = false;
            rep.violation = std::move(v);
            return rep;
        }
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                std::vector<int> t = order;
                std::swap(t[static_cast<std::size_t>(i)], t[static_cast<std::size_t>(j)]);
                MultiForm p2 = pullback(w.target, reordered_maps(w, t));
                if (auto v = compare_against(w.source, p2, t, pol, rep.max_residual)) {
                    rep.ok = false;
                    rep.violation = std::move(v);
                    return rep;
                }
            }
    }
    rep.ok = true;
    return rep;
}

MultiForm signed_form(const MultiForm& g, const std::vector<SignedBlock>& blocks,
                      const TolerancePolicy& pol) {
    if (blocks.empty()) return g;
    bool all_plus = std::all_of(blocks.begin(), blocks.end(),
                                [](const SignedBlock& b) { return b.sign == 1; });
    if (all_plus) return g;
    std::vector<LinearMap> bases;
    bases.reserve(blocks.size());
    for (const auto& b : blocks) bases.push_back(b.basis);
    LinearMap adapted = LinearMap::hstack(bases);
    if (adapted.cols() != g.dim()) throw DimensionMismatch("certificate blocks do not span the space");
    MultiForm a = change_basis(g, adapted);
    std::vector<int> strip(static_cast<std::size_t>(g.dim()), 0);
    int offset = 0;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        for (int c = 0; c < blocks[b].basis.cols(); ++c)
            strip[static_cast<std::size_t>(offset + c)] = static_cast<int>(b);
        offset += blocks[b].basis.cols();
    }
    std::vector<int> idx(static_cast<std::size_t>(g.arity()), 0);
    do {
        int s0 = strip[static_cast<std::size_t>(idx[0])];
        bool mixed = false;
        for (int v : idx)
            if (strip[static_cast<std::size_t>(v)] != s0) mixed = true;
        if (mixed) continue;  // vanishes up to tolerance; signs irrelevant
        if (blocks[static_cast<std::size_t>(s0)].sign == -1) a.at(idx) = -a.at(idx);
    } while (next_index(idx, g.dim()));
    return change_basis(a, inverse(adapted, pol));
}

double verify_congruence(const MultiForm& f, const MultiForm& g, const LinearMap& psi,
                         const std::vector<SignedBlock>* blocks, const TolerancePolicy& pol) {
    if (f.arity() != g.arity() || f.dim() != g.dim())
        throw DimensionMismatch("congruence of mismatched forms");
    MultiForm gs = blocks ? signed_form(g, *blocks, pol) : g;
    return max_abs_diff(f, change_basis(gs, psi));
}

// ------------------------------------------------------------------
// the inductive reduction shared by the complex and real routes

namespace {

struct ReductionResult {
    LinearMap psi;
    std::vector<SignedBlock> blocks;  // from the last round's sign map, if any
};

LinearMap assemble_block_diagonal(const SpectralSplit& split, const std::vector<LinearMap>& block_maps,
                                  const TolerancePolicy& pol) {
    std::vector<LinearMap> bases;
    bases.reserve(split.groups.size());
    for (const auto& g : split.groups) bases.push_back(g.basis);
    LinearMap b = LinearMap::hstack(bases);
    LinearMap diag = LinearMap::zeros(b.rows(), b.cols(), b.kind());
    int off = 0;
    for (std::size_t i = 0; i < block_maps.size(); ++i) {
        diag.set_block(off, off, block_maps[i]);
        off += block_maps[i].rows();
    }
    return b * diag * inverse(b, pol);
}

void guard_condition(const LinearMap& m, double limit, const TolerancePolicy& pol, const char* what) {
    if (is_exact(m.kind())) return;
    double c = condition_estimate(m, pol);
    if (c > limit) {
        std::ostringstream os;
        os << what << " condition estimate " << c << " exceeds limit " << limit;
        throw NumericalInstability(os.str());
    }
}

ReductionResult reduce_witness(const Witness& w, bool real_mode, const SymmetrizeOptions& opt) {
    check_witness_shapes(w);
    Kind kind = w.source.kind();
    if (real_mode && is_complex(kind)) throw KindMismatch("real reduction of a complex-kind witness");
    if (!real_mode && !is_complex(kind)) throw KindMismatch("complex reduction of a real-kind witness");

    WitnessReport wr = check_witness(w, opt.pol);
    if (!wr.ok)
        throw WitnessInvalid("witness fails its defining identity", wr.violation->reordering,
                             wr.violation->index);
    for (std::size_t i = 0; i < w.maps.size(); ++i) {
        if (is_exact(kind)) {
            if (det(w.maps[i]).is_zero())
                throw SingularMatrix("witness map " + std::to_string(i) + " is singular");
        } else {
            guard_condition(w.maps[i], opt.condition_limit, opt.pol,
                            ("witness map " + std::to_string(i)).c_str());
        }
    }

    const int n = w.source.arity();
    const int m = w.source.dim();
    SpectralOptions sopt;
    sopt.pol = opt.pol;
    sopt.cluster_rel = opt.cluster_rel;

    MultiForm g = w.target;
    LinearMap head = w.maps[0];
    std::vector<LinearMap> tail(w.maps.begin() + 1, w.maps.end());
    std::vector<SignedBlock> out_blocks;

    for (int t = 1; t <= n - 1; ++t) {
        LinearMap& phi_next = tail[static_cast<std::size_t>(t - 1)];
        LinearMap tau = head * inverse(phi_next, opt.pol);
        guard_condition(tau, opt.condition_limit, opt.pol, "tau");

        SelfadjointReport sar = is_selfadjoint(g, tau, opt.pol);
        if (!sar.ok)
            throw SelfadjointnessViolated("tau is not selfadjoint at round " + std::to_string(t),
                                          sar.slot_a, sar.slot_b, sar.index);

        SpectralSplit split = spectral_split(tau, real_mode ? SplitMode::Real : SplitMode::Complex, sopt);

        if (real_mode) {
            // absorb negative real eigenvalues with a sign map
            std::vector<int> signs(split.groups.size(), 1);
            bool any_negative = false;
            for (std::size_t i = 0; i < split.groups.size(); ++i) {
                const SpectralGroup& grp = split.groups[i];
                if (grp.pair) continue;
                bool negative = kind == Kind::Q ? grp.a.rational_value() < 0 : grp.a.real_value() < 0;
                if (negative) {
                    signs[i] = -1;
                    any_negative = true;
                }
            }
            if (any_negative) {
                std::vector<LinearMap> sign_blocks;
                for (std::size_t i = 0; i < split.groups.size(); ++i) {
                    LinearMap blk = LinearMap::identity(split.groups[i].multiplicity, kind);
                    if (signs[i] == -1) blk = -blk;
                    sign_blocks.push_back(std::move(blk));
                }
                LinearMap eps = assemble_block_diagonal(split, sign_blocks, opt.pol);
                phi_next = eps * phi_next;
                tau = tau * eps;  // eps is an involution commuting with tau
                for (std::size_t i = 0; i < split.groups.size(); ++i) {
                    if (signs[i] == -1) {
                        split.groups[i].a = -split.groups[i].a;
                        split.groups[i].restriction = -split.groups[i].restriction;
                    }
                }
                if (t + 1 < n) {
                    tail[static_cast<std::size_t>(t)] = eps * tail[static_cast<std::size_t>(t)];
                } else {
                    for (std::size_t i = 0; i < split.groups.size(); ++i)
                        out_blocks.push_back(SignedBlock{split.groups[i].basis, signs[i]});
                    // the target of the remaining identity is the signed form
                    g = signed_form(g, out_blocks, opt.pol);
                }
            }
        }

        std::vector<LinearMap> block_maps;
        block_maps.reserve(split.groups.size());
        for (const auto& grp : split.groups) {
            Poly f = real_mode ? inverse_root_poly_real(grp.restriction, grp, t + 1)
                               : inverse_root_poly_complex(grp.restriction, grp.a, t + 1);
            block_maps.push_back(poly_apply(f, grp.restriction));
        }
        LinearMap rho = assemble_block_diagonal(split, block_maps, opt.pol);

        // rho^{t+1} tau = I is the whole point of the round
        LinearMap check = pow_int(rho, t + 1, opt.pol) * tau;
        double root_residual = max_abs_diff(check, LinearMap::identity(m, kind));
        if (is_exact(kind)) {
            if (root_residual != 0.0) throw Error("exact inverse-root residual is nonzero");
        } else if (root_residual > 1e-6 * std::max(1.0, tau.inf_norm())) {
            throw NumericalInstability("inverse-root residual too large");
        }

        head = rho * head;

        if (opt.verify_each_step) {
            Witness step;
            step.source = w.source;
            step.target = g;
            step.maps.assign(static_cast<std::size_t>(t + 1), head);
            for (std::size_t i = static_cast<std::size_t>(t); i < tail.size(); ++i)
                step.maps.push_back(tail[i]);
            WitnessReport sr = check_witness(step, opt.pol);
            if (!sr.ok)
                throw Error("induction invariant lost at round " + std::to_string(t));
        }
    }

    ReductionResult out;
    out.psi = head;
    out.blocks = std::move(out_blocks);
    if (out.blocks.empty())
        out.blocks.push_back(SignedBlock{LinearMap::identity(m, kind), 1});
    return out;
}

}  // namespace

LinearMap symmetrize_complex(const Witness& w, const SymmetrizeOptions& opt) {
    ReductionResult r = reduce_witness(w, false, opt);
    double residual = verify_congruence(w.source, w.target, r.psi, nullptr, opt.pol);
    if (is_exact(w.source.kind())) {
        if (residual != 0.0) throw Error("exact congruence residual is nonzero");
    } else if (residual > 1e-6 * std::max(1.0, w.source.max_abs())) {
        throw NumericalInstability("congruence residual too large");
    }
    return r.psi;
}

SignedCongruence symmetrize_real(const Witness& w, const SymmetrizeOptions& opt) {
    ReductionResult r = reduce_witness(w, true, opt);
    SignedCongruence cert{r.psi, r.blocks};
    double residual = verify_congruence(w.source, w.target, cert.psi, &cert.blocks, opt.pol);
    if (is_exact(w.source.kind())) {
        if (residual != 0.0) throw Error("exact congruence residual is nonzero");
    } else if (residual > 1e-6 * std::max(1.0, w.source.max_abs())) {
        throw NumericalInstability("congruence residual too large");
    }
    return cert;
}

Witness convert_witness(const Witness& w, Kind k) {
    Witness out;
    out.source = w.source.convert_to(k);
    out.target = w.target.convert_to(k);
    out.maps.reserve(w.maps.size());
    for (const auto& m : w.maps) out.maps.push_back(m.convert_to(k));
    return out;
}

SymmetrizeOutcome symmetrize_with_fallback(const Witness& w, const SymmetrizeOptions& opt) {
    Kind kind = w.source.kind();
    auto run = [&](const Witness& wit) -> SignedCongruence {
        if (is_complex(wit.source.kind())) {
            LinearMap psi = symmetrize_complex(wit, opt);
            return SignedCongruence{psi, {SignedBlock{LinearMap::identity(wit.source.dim(), wit.source.kind()), 1}}};
        }
        return symmetrize_real(wit, opt);
    };
    if (!is_exact(kind)) return {run(w), kind};
    try {
        return {run(w), kind};
    } catch (const NoRootInField&) {
    } catch (const EigenvalueNotFound&) {
    }
    Kind fk = float_fallback(kind);
    return {run(convert_witness(w, fk)), fk};
}

}  // namespace multiform
