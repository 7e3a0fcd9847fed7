#include "multiform/multi_form.hpp"

#include <algorithm>
#include <cmath>

namespace multiform {

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
    std::vector<bool> seen(images_.size(), false);
    for (int v : images_) {
        if (v < 0 || v >= static_cast<int>(images_.size()) || seen[static_cast<std::size_t>(v)])
            throw Error("not a permutation");
        seen[static_cast<std::size_t>(v)] = true;
    }
}

Permutation Permutation::identity(int n) {
    std::vector<int> im(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) im[static_cast<std::size_t>(i)] = i;
    return Permutation(std::move(im));
}

Permutation Permutation::transposition(int n, int a, int b) {
    Permutation p = identity(n);
    std::swap(p.images_[static_cast<std::size_t>(a)], p.images_[static_cast<std::size_t>(b)]);
    return p;
}

Permutation Permutation::then(const Permutation& next) const {
    if (size() != next.size()) throw DimensionMismatch("permutation size mismatch");
    std::vector<int> im(images_.size());
    for (std::size_t i = 0; i < images_.size(); ++i)
        im[i] = next.images_[static_cast<std::size_t>(images_[i])];
    return Permutation(std::move(im));
}

Permutation Permutation::inverse() const {
    std::vector<int> im(images_.size());
    for (std::size_t i = 0; i < images_.size(); ++i)
        im[static_cast<std::size_t>(images_[i])] = static_cast<int>(i);
    return Permutation(std::move(im));
}

int Permutation::sign() const {
    std::vector<bool> seen(images_.size(), false);
    int sign = 1;
    for (std::size_t i = 0; i < images_.size(); ++i) {
        if (seen[i]) continue;
        int len = 0;
        for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(images_[j])) {
            seen[j] = true;
            ++len;
        }
        if (len % 2 == 0) sign = -sign;
    }
    return sign;
}

// ------------------------------------------------------------------

namespace {

std::size_t pow_size(int dim, int arity) {
    std::size_t s = 1;
    for (int i = 0; i < arity; ++i) s *= static_cast<std::size_t>(dim);
    return s;
}

}  // namespace

MultiForm::MultiForm(int arity, int dim, Kind kind)
    : arity_(arity), dim_(dim), kind_(kind), coeffs_(pow_size(dim, arity), Scalar::zero(kind)) {
    if (arity < 2) throw DimensionMismatch("arity must be at least 2");
    if (dim < 0) throw DimensionMismatch("negative dimension");
}

std::size_t MultiForm::flatten(const std::vector<int>& idx) const {
    if (static_cast<int>(idx.size()) != arity_) throw DimensionMismatch("index arity mismatch");
    std::size_t flat = 0;
    for (int v : idx) {
        if (v < 0 || v >= dim_) throw DimensionMismatch("index out of range");
        flat = flat * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(v);
    }
    return flat;
}

std::vector<int> MultiForm::unflatten(std::size_t flat) const {
    std::vector<int> idx(static_cast<std::size_t>(arity_));
    for (int k = arity_ - 1; k >= 0; --k) {
        idx[static_cast<std::size_t>(k)] = static_cast<int>(flat % static_cast<std::size_t>(dim_));
        flat /= static_cast<std::size_t>(dim_);
    }
    return idx;
}

const Scalar& MultiForm::at(const std::vector<int>& idx) const { return coeffs_[flatten(idx)]; }
Scalar& MultiForm::at(const std::vector<int>& idx) { return coeffs_[flatten(idx)]; }

MultiForm MultiForm::convert_to(Kind k) const {
    MultiForm out(arity_, dim_, k);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) out.coeffs_[i] = coeffs_[i].convert_to(k);
    return out;
}

MultiForm MultiForm::scaled(const Scalar& c) const {
    MultiForm out(arity_, dim_, kind_);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) out.coeffs_[i] = coeffs_[i] * c;
    return out;
}

MultiForm MultiForm::operator+(const MultiForm& rhs) const {
    if (arity_ != rhs.arity_ || dim_ != rhs.dim_) throw DimensionMismatch("form shape mismatch");
    MultiForm out(arity_, dim_, kind_);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) out.coeffs_[i] = coeffs_[i] + rhs.coeffs_[i];
    return out;
}

MultiForm MultiForm::operator-(const MultiForm& rhs) const {
    return *this + rhs.scaled(-Scalar::one(kind_));
}

bool MultiForm::is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Scalar& c) { return c.is_zero(); });
}

double MultiForm::max_abs() const {
    double m = 0.0;
    for (const auto& c : coeffs_) m = std::max(m, c.abs_approx());
    return m;
}

bool operator==(const MultiForm& a, const MultiForm& b) {
    return a.arity_ == b.arity_ && a.dim_ == b.dim_ && a.kind_ == b.kind_ && a.coeffs_ == b.coeffs_;
}

bool next_index(std::vector<int>& idx, int dim) {
    for (std::size_t k = idx.size(); k-- > 0;) {
        if (++idx[k] < dim) return true;
        idx[k] = 0;
    }
    return false;
}

double max_abs_diff(const MultiForm& a, const MultiForm& b) {
    if (a.arity() != b.arity() || a.dim() != b.dim()) throw DimensionMismatch("form shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, (a.at_flat(i) - b.at_flat(i)).abs_approx());
    return m;
}

bool approx_eq(const MultiForm& a, const MultiForm& b, const TolerancePolicy& pol) {
    if (a.arity() != b.arity() || a.dim() != b.dim() || a.kind() != b.kind()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!Scalar::approx_eq(a.at_flat(i), b.at_flat(i), pol)) return false;
    return true;
}

// ------------------------------------------------------------------

Scalar eval(const MultiForm& f, const std::vector<std::vector<Scalar>>& xs) {
    if (static_cast<int>(xs.size()) != f.arity()) throw DimensionMismatch("wrong number of arguments");
    for (const auto& x : xs)
        if (static_cast<int>(x.size()) != f.dim()) throw DimensionMismatch("argument length mismatch");
    // fold one slot at a time: contract the trailing index with xs[n-1], etc.
    std::vector<Scalar> acc(f.size() == 0 ? 0 : f.size(), Scalar::zero(f.kind()));
    for (std::size_t i = 0; i < f.size(); ++i) acc[i] = f.at_flat(i);
    std::size_t len = f.size();
    const std::size_t m = static_cast<std::size_t>(f.dim());
    for (int slot = f.arity() - 1; slot >= 0; --slot) {
        if (m == 0) return Scalar::zero(f.kind());
        std::size_t new_len = len / m;
        std::vector<Scalar> next(new_len, Scalar::zero(f.kind()));
        for (std::size_t b = 0; b < new_len; ++b)
            for (std::size_t j = 0; j < m; ++j) next[b] = next[b] + acc[b * m + j] * xs[static_cast<std::size_t>(slot)][j];
        acc = std::move(next);
        len = new_len;
    }
    return acc.empty() ? Scalar::zero(f.kind()) : acc[0];
}

MultiForm permute_slots(const MultiForm& f, const Permutation& sigma) {
    if (sigma.size() != f.arity()) throw DimensionMismatch("permutation arity mismatch");
    MultiForm out(f.arity(), f.dim(), f.kind());
    if (f.dim() == 0) return out;
    std::vector<int> idx(static_cast<std::size_t>(f.arity()), 0);
    std::vector<int> src(idx.size());
    do {
        for (int k = 0; k < f.arity(); ++k) src[static_cast<std::size_t>(k)] = idx[static_cast<std::size_t>(sigma(k))];
        out.at(idx) = f.at(src);
    } while (next_index(idx, f.dim()));
    return out;
}

MultiForm contract_slot(const MultiForm& f, int slot, const LinearMap& m) {
    if (slot < 0 || slot >= f.arity()) throw DimensionMismatch("slot out of range");
    if (m.rows() != f.dim()) throw DimensionMismatch("contraction matrix shape mismatch");
    if (m.kind() != f.kind()) throw KindMismatch("contraction kind mismatch");
    if (m.cols() != f.dim())
        throw DimensionMismatch("contract_slot requires a square matrix; use restrict_to_subspace");
    MultiForm out(f.arity(), f.dim(), f.kind());
    if (f.dim() == 0) return out;
    // stride of the contracted slot in the flat layout
    std::size_t stride = 1;
    for (int k = f.arity() - 1; k > slot; --k) stride *= static_cast<std::size_t>(f.dim());
    const std::size_t dim = static_cast<std::size_t>(f.dim());
    for (std::size_t flat = 0; flat < out.size(); ++flat) {
        std::size_t i = (flat / stride) % dim;          // target index in the slot
        std::size_t base = flat - i * stride;           // slot index zeroed
        Scalar s = Scalar::zero(f.kind());
        for (std::size_t j = 0; j < dim; ++j) {
            const Scalar& c = f.at_flat(base + j * stride);
            if (!c.is_zero()) s = s + c * m.at(static_cast<int>(j), static_cast<int>(i));
        }
        out.at_flat(flat) = s;
    }
    return out;
}

MultiForm change_basis(const MultiForm& f, const LinearMap& c) {
    if (!c.is_square() || c.rows() != f.dim()) throw DimensionMismatch("transition matrix shape mismatch");
    MultiForm out = f;
    for (int slot = 0; slot < f.arity(); ++slot) out = contract_slot(out, slot, c);
    return out;
}

MultiForm restrict_to_subspace(const MultiForm& f, const LinearMap& basis) {
    if (basis.rows() != f.dim()) throw DimensionMismatch("subspace basis shape mismatch");
    if (basis.kind() != f.kind()) throw KindMismatch("basis kind mismatch");
    const int d = basis.cols();
    MultiForm out(f.arity(), d, f.kind());
    if (d == 0) return out;
    // contract slots one at a time; intermediate tensors have mixed extents,
    // handled with explicit strides over a flat buffer
    std::vector<int> extents(static_cast<std::size_t>(f.arity()), f.dim());
    std::vector<Scalar> buf(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) buf[i] = f.at_flat(i);
    for (int slot = 0; slot < f.arity(); ++slot) {
        std::size_t before = 1, after = 1;
        for (int k = 0; k < slot; ++k) before *= static_cast<std::size_t>(extents[static_cast<std::size_t>(k)]);
        for (int k = slot + 1; k < f.arity(); ++k) after *= static_cast<std::size_t>(extents[static_cast<std::size_t>(k)]);
        std::size_t old_dim = static_cast<std::size_t>(extents[static_cast<std::size_t>(slot)]);
        std::vector<Scalar> next(before * static_cast<std::size_t>(d) * after, Scalar::zero(f.kind()));
        for (std::size_t b = 0; b < before; ++b)
            for (std::size_t i = 0; i < static_cast<std::size_t>(d); ++i)
                for (std::size_t a = 0; a < after; ++a) {
                    Scalar s = Scalar::zero(f.kind());
                    for (std::size_t j = 0; j < old_dim; ++j) {
                        const Scalar& cv = buf[(b * old_dim + j) * after + a];
                        if (!cv.is_zero())
                            s = s + cv * basis.at(static_cast<int>(j), static_cast<int>(i));
                    }
                    next[(b * static_cast<std::size_t>(d) + i) * after + a] = s;
                }
        buf = std::move(next);
        extents[static_cast<std::size_t>(slot)] = d;
    }
    for (std::size_t i = 0; i < out.size(); ++i) out.at_flat(i) = buf[i];
    return out;
}

MultiForm pullback(const MultiForm& f, const std::vector<LinearMap>& maps) {
    if (static_cast<int>(maps.size()) != f.arity()) throw DimensionMismatch("one map per slot required");
    MultiForm out = f;
    for (int slot = 0; slot < f.arity(); ++slot) out = contract_slot(out, slot, maps[static_cast<std::size_t>(slot)]);
    return out;
}

MultiForm direct_sum(const MultiForm& f, const MultiForm& g) {
    if (f.arity() != g.arity()) throw DimensionMismatch("direct sum arity mismatch");
    if (f.kind() != g.kind()) throw KindMismatch("direct sum kind mismatch");
    MultiForm out(f.arity(), f.dim() + g.dim(), f.kind());
    std::vector<int> idx(static_cast<std::size_t>(f.arity()), 0);
    if (f.dim() > 0) {
        do {
            out.at(idx) = f.at(idx);
        } while (next_index(idx, f.dim()));
    }
    if (g.dim() > 0) {
        std::vector<int> gidx(static_cast<std::size_t>(g.arity()), 0);
        std::vector<int> shifted(gidx.size());
        do {
            for (std::size_t k = 0; k < gidx.size(); ++k) shifted[k] = gidx[k] + f.dim();
            out.at(shifted) = g.at(gidx);
        } while (next_index(gidx, g.dim()));
    }
    return out;
}

LinearMap radical(const MultiForm& f, const TolerancePolicy& pol) {
    const int m = f.dim(), n = f.arity();
    if (m == 0) return LinearMap::zeros(0, 0, f.kind());
    // stack the n slot-flattenings: row (slot, rest-tuple), column j holds
    // F(..., u_j at slot, ...)
    std::size_t rest = f.size() / static_cast<std::size_t>(m);
    LinearMap stacked(static_cast<int>(static_cast<std::size_t>(n) * rest), m, f.kind());
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    for (int slot = 0; slot < n; ++slot) {
        std::size_t stride = 1;
        for (int k = n - 1; k > slot; --k) stride *= static_cast<std::size_t>(m);
        std::size_t r = 0;
        for (std::size_t flat = 0; flat < f.size(); ++flat) {
            std::size_t j = (flat / stride) % static_cast<std::size_t>(m);
            if (j != 0) continue;  // enumerate rest-tuples via slot index 0
            for (std::size_t jj = 0; jj < static_cast<std::size_t>(m); ++jj)
                stacked.at(static_cast<int>(static_cast<std::size_t>(slot) * rest + r), static_cast<int>(jj)) =
                    f.at_flat(flat + jj * stride);
            ++r;
        }
    }
    return kernel_basis(stacked, pol);
}

EpsilonSymmetryReport is_epsilon_symmetric(const MultiForm& f, const std::vector<int>& generator_signs,
                                           const TolerancePolicy& pol) {
    const int n = f.arity();
    if (static_cast<int>(generator_signs.size()) != n - 1)
        throw DimensionMismatch("one sign per adjacent transposition required");
    for (int s : generator_signs)
        if (s != 1 && s != -1) throw InconsistentSignMap("signs must be +1 or -1");
    // adjacent transpositions are conjugate in S_n for n >= 3, so a sign
    // character must grade them all equally
    if (n >= 3) {
        for (int s : generator_signs)
            if (s != generator_signs[0])
                throw InconsistentSignMap("generator signs do not extend to a character of S_n");
    }
    EpsilonSymmetryReport rep;
    for (int t = 0; t + 1 < n; ++t) {
        MultiForm permuted = permute_slots(f, Permutation::transposition(n, t, t + 1));
        MultiForm expected = generator_signs[static_cast<std::size_t>(t)] == 1
                                 ? f
                                 : f.scaled(-Scalar::one(f.kind()));
        if (!approx_eq(permuted, expected, pol)) {
            for (std::size_t i = 0; i < f.size(); ++i)
                if (!Scalar::approx_eq(permuted.at_flat(i), expected.at_flat(i), pol)) {
                    rep.violating_index = f.unflatten(i);
                    break;
                }
            rep.violating_slot = t;
            rep.symmetric = false;
            return rep;
        }
    }
    rep.symmetric = true;
    return rep;
}

}  // namespace multiform
