#include "multiform/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace multiform {

namespace {

LinearMap concat_with_radical(const Decomposition& d) {
    std::vector<LinearMap> parts = d.blocks;
    if (d.radical_basis.cols() > 0 || parts.empty()) parts.push_back(d.radical_basis);
    return LinearMap::hstack(parts);
}

}  // namespace

void validate_decomposition(const MultiForm& f, const Decomposition& d, const TolerancePolicy& pol,
                            bool require_nonzero_blocks) {
    if (d.dim != f.dim() || d.kind != f.kind())
        throw DimensionMismatch("decomposition does not match the form");
    int total = d.radical_basis.cols();
    for (const auto& b : d.blocks) {
        if (b.rows() != f.dim()) throw DimensionMismatch("block basis has wrong height");
        if (b.cols() == 0) throw DimensionMismatch("empty block in decomposition");
        total += b.cols();
    }
    if (total != f.dim()) throw DimensionMismatch("decomposition bases do not account for the dimension");
    if (f.dim() == 0) return;

    LinearMap all = concat_with_radical(d);
    if (rank(all, pol) != f.dim()) throw DimensionMismatch("decomposition bases are not independent");

    // mixed-part vanishing in the adapted basis; the radical strip must not
    // touch any nonzero coefficient at all
    std::vector<int> strip(static_cast<std::size_t>(f.dim()), -1);
    int offset = 0;
    for (std::size_t b = 0; b < d.blocks.size(); ++b) {
        for (int c = 0; c < d.blocks[b].cols(); ++c)
            strip[static_cast<std::size_t>(offset + c)] = static_cast<int>(b);
        offset += d.blocks[b].cols();
    }
    MultiForm a = change_basis(f, all);
    double threshold = pol.abs + pol.rel * std::max(1.0, a.max_abs());
    std::vector<bool> block_nonzero(d.blocks.size(), false);
    std::vector<int> idx(static_cast<std::size_t>(f.arity()), 0);
    do {
        const Scalar& v = a.at(idx);
        bool zero = is_exact(f.kind()) ? v.is_zero() : v.abs_approx() <= threshold;
        if (zero) continue;
        int s0 = strip[static_cast<std::size_t>(idx[0])];
        for (int c : idx) {
            int s = strip[static_cast<std::size_t>(c)];
            if (s != s0 || s < 0)
                throw MixedBlockNonzero("nonzero coefficient crosses decomposition parts", idx);
        }
        block_nonzero[static_cast<std::size_t>(s0)] = true;
    } while (next_index(idx, f.dim()));

    if (require_nonzero_blocks)
        for (std::size_t b = 0; b < d.blocks.size(); ++b)
            if (!block_nonzero[b]) throw DimensionMismatch("decomposition has a zero summand among blocks");
}

std::pair<LinearMap, LinearMap> split_radical(const MultiForm& f, const TolerancePolicy& pol) {
    LinearMap rad = radical(f, pol);
    const int m = f.dim(), k = rad.cols();
    // complement from the standard vectors at non-pivot coordinates of the
    // radical's span
    Echelon e = echelon(rad.transpose(), pol);
    std::vector<bool> pivot(static_cast<std::size_t>(m), false);
    for (int p : e.pivot_cols) pivot[static_cast<std::size_t>(p)] = true;
    LinearMap comp(m, m - k, f.kind());
    int c = 0;
    for (int i = 0; i < m; ++i) {
        if (pivot[static_cast<std::size_t>(i)]) continue;
        comp.at(i, c++) = Scalar::one(f.kind());
    }
    if (c != m - k) throw Error("radical rank inconsistent with its echelon form");
    return {comp, rad};
}

LinearMap radical_complement_congruence(const MultiForm& f, const LinearMap& basis_a,
                                        const LinearMap& basis_b, const TolerancePolicy& pol) {
    LinearMap rad = radical(f, pol);
    const int m = f.dim(), k = rad.cols(), d = m - k;
    if (basis_a.cols() != d || basis_b.cols() != d || basis_a.rows() != m || basis_b.rows() != m)
        throw NotAComplement("complement basis has wrong dimensions");
    LinearMap ext_a = LinearMap::hstack({basis_a, rad});
    LinearMap ext_b = LinearMap::hstack({basis_b, rad});
    if (rank(ext_a, pol) != m) throw NotAComplement("first basis does not complement the radical");
    if (rank(ext_b, pol) != m) throw NotAComplement("second basis does not complement the radical");
    // coordinates of a_i in (basis_b | radical); dropping the radical rows
    // projects onto span(basis_b) along the radical
    LinearMap coords = inverse(ext_b, pol) * basis_a;
    return coords.block(0, 0, d, d);
}

Decomposition support_blocks(const MultiForm& f, const TolerancePolicy& pol) {
    const int m = f.dim();
    double threshold = pol.abs + pol.rel * std::max(1.0, f.max_abs());
    std::vector<int> parent(static_cast<std::size_t>(m));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int a) {
        while (parent[static_cast<std::size_t>(a)] != a) {
            parent[static_cast<std::size_t>(a)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
            a = parent[static_cast<std::size_t>(a)];
        }
        return a;
    };
    std::vector<bool> touched(static_cast<std::size_t>(m), false);
    for (std::size_t flat = 0; flat < f.size(); ++flat) {
        const Scalar& v = f.at_flat(flat);
        bool zero = is_exact(f.kind()) ? v.is_zero() : v.abs_approx() <= threshold;
        if (zero) continue;
        std::vector<int> idx = f.unflatten(flat);
        touched[static_cast<std::size_t>(idx[0])] = true;
        for (std::size_t k = 1; k < idx.size(); ++k) {
            touched[static_cast<std::size_t>(idx[k])] = true;
            parent[static_cast<std::size_t>(find(idx[0]))] = find(idx[k]);
        }
    }
    // components in order of smallest member
    std::vector<std::vector<int>> comps;
    std::vector<int> comp_of(static_cast<std::size_t>(m), -1);
    std::vector<int> radical_coords;
    for (int i = 0; i < m; ++i) {
        if (!touched[static_cast<std::size_t>(i)]) {
            radical_coords.push_back(i);
            continue;
        }
        int r = find(i);
        if (comp_of[static_cast<std::size_t>(r)] < 0) {
            comp_of[static_cast<std::size_t>(r)] = static_cast<int>(comps.size());
            comps.emplace_back();
        }
        comps[static_cast<std::size_t>(comp_of[static_cast<std::size_t>(r)])].push_back(i);
    }
    Decomposition dec;
    dec.dim = m;
    dec.kind = f.kind();
    for (const auto& comp : comps) {
        LinearMap b(m, static_cast<int>(comp.size()), f.kind());
        for (std::size_t c = 0; c < comp.size(); ++c)
            b.at(comp[c], static_cast<int>(c)) = Scalar::one(f.kind());
        dec.blocks.push_back(std::move(b));
    }
    dec.radical_basis = LinearMap(m, static_cast<int>(radical_coords.size()), f.kind());
    for (std::size_t c = 0; c < radical_coords.size(); ++c)
        dec.radical_basis.at(radical_coords[c], static_cast<int>(c)) = Scalar::one(f.kind());
    return dec;
}

int count_nonzero_summands(const MultiForm& f, const TolerancePolicy& pol) {
    return static_cast<int>(support_blocks(f, pol).blocks.size());
}

namespace {

// layer-rank diagnostic for failed trilinear alignments
std::string layer_rank_note(const MultiForm& fs, const LinearMap& c, const TolerancePolicy& pol) {
    if (fs.arity() != 3) return "";
    const int d = fs.dim();
    long lhs = 0, rhs = 0;
    for (int k = 0; k < d; ++k) {
        LinearMap layer(d, d, fs.kind());
        LinearMap h(d, d, fs.kind());
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                layer.at(i, j) = fs.at({i, j, k});
                Scalar s = Scalar::zero(fs.kind());
                for (int l = 0; l < d; ++l) s = s + fs.at({i, j, l}) * c.at(l, k);
                h.at(i, j) = s;
            }
        lhs += rank(layer, pol);
        rhs += rank(h, pol);
    }
    std::ostringstream os;
    os << " (layer rank sums: source " << lhs << ", transformed " << rhs << ")";
    return os.str();
}

void all_permutations(int s, std::vector<std::vector<int>>& out) {
    std::vector<int> p(static_cast<std::size_t>(s));
    std::iota(p.begin(), p.end(), 0);
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
}

}  // namespace

Alignment align_decompositions(const MultiForm& f, const Decomposition& d1, const Decomposition& d2,
                               const TolerancePolicy& pol) {
    validate_decomposition(f, d1, pol, true);
    validate_decomposition(f, d2, pol, true);
    const std::size_t s = d1.blocks.size();
    if (d2.blocks.size() != s)
        throw BlockCountMismatch("decompositions have different numbers of blocks");
    if (d1.radical_basis.cols() != d2.radical_basis.cols())
        throw BlockCountMismatch("decompositions have different radical dimensions");

    // the radical parts must agree as subspaces (both span the radical of F)
    if (d1.radical_basis.cols() > 0) {
        LinearMap joint = LinearMap::hstack({d1.radical_basis, d2.radical_basis});
        if (rank(joint, pol) != d1.radical_basis.cols())
            throw BlockCountMismatch("radical parts of the decompositions differ");
    }

    Alignment out;
    if (s == 0) return out;

    // work modulo the radical: express d2 blocks in (d1 blocks | radical)
    // coordinates and drop the radical rows
    LinearMap strip_basis = LinearMap::hstack(d1.blocks);
    const int d = strip_basis.cols();
    std::vector<LinearMap> full_parts = d1.blocks;
    if (d1.radical_basis.cols() > 0) full_parts.push_back(d1.radical_basis);
    LinearMap full = LinearMap::hstack(full_parts);
    LinearMap full_inv = inverse(full, pol);
    LinearMap d2_all = LinearMap::hstack(d2.blocks);
    LinearMap c = (full_inv * d2_all).block(0, 0, d, d);

    std::vector<int> row_offset(s, 0), row_size(s, 0);
    {
        int off = 0;
        for (std::size_t p = 0; p < s; ++p) {
            row_offset[p] = off;
            row_size[p] = d1.blocks[p].cols();
            off += row_size[p];
        }
    }
    std::vector<int> col_offset(s, 0), col_size(s, 0);
    {
        int off = 0;
        for (std::size_t q = 0; q < s; ++q) {
            col_offset[q] = off;
            col_size[q] = d2.blocks[q].cols();
            off += col_size[q];
        }
    }

    std::vector<std::vector<int>> perms;
    all_permutations(static_cast<int>(s), perms);

    double threshold = pol.abs + pol.rel * std::max(1.0, c.max_abs());
    bool dims_matched = false;
    std::optional<std::pair<int, int>> first_offdiag;
    std::string first_note;

    for (const auto& perm : perms) {
        bool dims_ok = true;
        for (std::size_t p = 0; p < s; ++p)
            if (row_size[p] != col_size[static_cast<std::size_t>(perm[p])]) dims_ok = false;
        if (!dims_ok) continue;
        dims_matched = true;

        std::vector<LinearMap> diag;
        bool invertible = true;
        for (std::size_t p = 0; p < s && invertible; ++p) {
            LinearMap blk = c.block(row_offset[p], col_offset[static_cast<std::size_t>(perm[p])],
                                    row_size[p], col_size[static_cast<std::size_t>(perm[p])]);
            if (rank(blk, pol) != blk.rows()) {
                invertible = false;
                break;
            }
            diag.push_back(std::move(blk));
        }
        if (!invertible) continue;

        // normalize: identity diagonal blocks via row operations within strips
        LinearMap reduced = c;
        for (std::size_t p = 0; p < s; ++p) {
            LinearMap inv_diag = inverse(diag[p], pol);
            LinearMap strip = reduced.block(row_offset[p], 0, row_size[p], d);
            reduced.set_block(row_offset[p], 0, inv_diag * strip);
        }

        bool off_ok = true;
        for (std::size_t p = 0; p < s && off_ok; ++p)
            for (std::size_t q = 0; q < s && off_ok; ++q) {
                if (q == p) continue;
                LinearMap blk = reduced.block(row_offset[p], col_offset[static_cast<std::size_t>(perm[q])],
                                              row_size[p], col_size[static_cast<std::size_t>(perm[q])]);
                double mag = blk.max_abs();
                bool zero = is_exact(f.kind()) ? mag == 0.0 : mag <= threshold;
                if (!zero) {
                    off_ok = false;
                    if (!first_offdiag) {
                        first_offdiag = {static_cast<int>(p), static_cast<int>(q)};
                        first_note = layer_rank_note(restrict_to_subspace(f, strip_basis), c, pol);
                    }
                }
            }
        if (!off_ok) continue;

        // certify per-block congruences: F|V_{perm(p)} = (F|U_p) transported
        // through the diagonal block
        bool congruent = true;
        for (std::size_t p = 0; p < s && congruent; ++p) {
            MultiForm fu = restrict_to_subspace(f, d1.blocks[p]);
            MultiForm fv = restrict_to_subspace(f, d2.blocks[static_cast<std::size_t>(perm[p])]);
            MultiForm moved = change_basis(fu, diag[p]);
            if (is_exact(f.kind()) ? !(moved == fv) : !approx_eq(moved, fv, pol)) congruent = false;
        }
        if (!congruent) continue;

        out.permutation = perm;
        out.block_maps = std::move(diag);
        return out;
    }

    if (!dims_matched)
        throw BlockCountMismatch("no block permutation matches the dimension multisets");
    if (first_offdiag)
        throw OffDiagonalNonzero("transition matrix keeps coupling blocks " +
                                     std::to_string(first_offdiag->first) + " and " +
                                     std::to_string(first_offdiag->second) + first_note,
                                 first_offdiag->first, first_offdiag->second);
    throw BlockCountMismatch("no block permutation yields invertible diagonal blocks");
}

bool certify_indecomposable_by_slices(const MultiForm& f, const TolerancePolicy& pol) {
    const int m = f.dim();
    const int n = f.arity();
    if (m == 0) return false;
    if (m == 1) return !f.is_zero();
    // every two-slot slice of a decomposable form annihilates u x v and
    // v x u for the splitting subspaces, capping the slice span at
    // m^2 - 2(m-1); a larger span rules every splitting out
    std::vector<std::vector<Scalar>> rows;
    std::vector<int> rest(static_cast<std::size_t>(n - 2), 0);
    for (int si = 0; si < n; ++si)
        for (int sj = si + 1; sj < n; ++sj) {
            do {
                std::vector<Scalar> row;
                row.reserve(static_cast<std::size_t>(m) * static_cast<std::size_t>(m));
                std::vector<int> idx(static_cast<std::size_t>(n), 0);
                for (int i = 0; i < m; ++i)
                    for (int j = 0; j < m; ++j) {
                        int r = 0;
                        for (int k = 0; k < n; ++k) {
                            if (k == si) idx[static_cast<std::size_t>(k)] = i;
                            else if (k == sj) idx[static_cast<std::size_t>(k)] = j;
                            else idx[static_cast<std::size_t>(k)] = rest[static_cast<std::size_t>(r++)];
                        }
                        row.push_back(f.at(idx));
                    }
                rows.push_back(std::move(row));
            } while (n > 2 && next_index(rest, m));
        }
    LinearMap slice_span(static_cast<int>(rows.size()), m * m, f.kind());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (int j = 0; j < m * m; ++j) slice_span.at(static_cast<int>(i), j) = rows[i][static_cast<std::size_t>(j)];
    return rank(slice_span, pol) > m * m - 2 * (m - 1);
}

}  // namespace multiform
