// Independent brute-force implementations used as test oracles. Everything
// here is written against the definitions, not against the library code
// paths it checks: literal nested sums, Laplace-expansion inverses, explicit
// power accumulation.
#pragma once

#include <vector>

#include "multiform/multi_form.hpp"
#include "multiform/poly.hpp"

namespace oracle {

using multiform::Kind;
using multiform::LinearMap;
using multiform::MultiForm;
using multiform::Permutation;
using multiform::Scalar;

// sum over all multi-indices of coeff * product of coordinates
inline Scalar eval(const MultiForm& f, const std::vector<std::vector<Scalar>>& xs) {
    Scalar total = Scalar::zero(f.kind());
    if (f.dim() == 0) return total;
    std::vector<int> idx(static_cast<std::size_t>(f.arity()), 0);
    do {
        Scalar term = f.at(idx);
        for (int k = 0; k < f.arity(); ++k)
            term = term * xs[static_cast<std::size_t>(k)][static_cast<std::size_t>(idx[static_cast<std::size_t>(k)])];
        total = total + term;
    } while (multiform::next_index(idx, f.dim()));
    return total;
}

inline std::vector<Scalar> basis_vector(int dim, int i, Kind kind) {
    std::vector<Scalar> e(static_cast<std::size_t>(dim), Scalar::zero(kind));
    e[static_cast<std::size_t>(i)] = Scalar::one(kind);
    return e;
}

// F^sigma coefficient by evaluating the definition on basis tuples
inline MultiForm permute_slots(const MultiForm& f, const Permutation& sigma) {
    MultiForm out(f.arity(), f.dim(), f.kind());
    if (f.dim() == 0) return out;
    std::vector<int> idx(static_cast<std::size_t>(f.arity()), 0);
    do {
        std::vector<std::vector<Scalar>> xs;
        for (int k = 0; k < f.arity(); ++k)
            xs.push_back(basis_vector(f.dim(), idx[static_cast<std::size_t>(sigma(k))], f.kind()));
        out.at(idx) = oracle::eval(f, xs);
    } while (multiform::next_index(idx, f.dim()));
    return out;
}

// literal per-entry sum for one contracted slot
inline MultiForm contract_slot(const MultiForm& f, int slot, const LinearMap& m) {
    MultiForm out(f.arity(), f.dim(), f.kind());
    if (f.dim() == 0) return out;
    std::vector<int> idx(static_cast<std::size_t>(f.arity()), 0);
    do {
        Scalar s = Scalar::zero(f.kind());
        std::vector<int> src = idx;
        for (int j = 0; j < f.dim(); ++j) {
            src[static_cast<std::size_t>(slot)] = j;
            s = s + f.at(src) * m.at(j, idx[static_cast<std::size_t>(slot)]);
        }
        out.at(idx) = s;
    } while (multiform::next_index(idx, f.dim()));
    return out;
}

// full nested sum: b_{j} = sum_i a_i * prod_k c[i_k, j_k]
inline MultiForm change_basis(const MultiForm& f, const LinearMap& c) {
    MultiForm out(f.arity(), f.dim(), f.kind());
    if (f.dim() == 0) return out;
    std::vector<int> jdx(static_cast<std::size_t>(f.arity()), 0);
    do {
        Scalar s = Scalar::zero(f.kind());
        std::vector<int> idx(static_cast<std::size_t>(f.arity()), 0);
        do {
            Scalar term = f.at(idx);
            for (int k = 0; k < f.arity(); ++k)
                term = term * c.at(idx[static_cast<std::size_t>(k)], jdx[static_cast<std::size_t>(k)]);
            s = s + term;
        } while (multiform::next_index(idx, f.dim()));
        out.at(jdx) = s;
    } while (multiform::next_index(jdx, f.dim()));
    return out;
}

// Laplace-expansion determinant
inline Scalar det_laplace(const LinearMap& a) {
    const int n = a.rows();
    if (n == 0) return Scalar::one(a.kind());
    if (n == 1) return a.at(0, 0);
    Scalar total = Scalar::zero(a.kind());
    for (int j = 0; j < n; ++j) {
        if (a.at(0, j).is_zero()) continue;
        LinearMap minor(n - 1, n - 1, a.kind());
        for (int r = 1; r < n; ++r) {
            int cc = 0;
            for (int c = 0; c < n; ++c) {
                if (c == j) continue;
                minor.at(r - 1, cc++) = a.at(r, c);
            }
        }
        Scalar cofactor = a.at(0, j) * det_laplace(minor);
        total = j % 2 == 0 ? total + cofactor : total - cofactor;
    }
    return total;
}

// adjugate inverse: entirely independent of the elimination engine
inline LinearMap inverse_adjugate(const LinearMap& a) {
    const int n = a.rows();
    Scalar d = det_laplace(a);
    LinearMap out(n, n, a.kind());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            LinearMap minor(n - 1, n - 1, a.kind());
            for (int r = 0, rr = 0; r < n; ++r) {
                if (r == j) continue;
                for (int c = 0, cc = 0; c < n; ++c) {
                    if (c == i) continue;
                    minor.at(rr, cc++) = a.at(r, c);
                }
                ++rr;
            }
            Scalar cof = det_laplace(minor);
            if ((i + j) % 2 == 1) cof = -cof;
            out.at(i, j) = cof / d;
        }
    return out;
}

// explicit power accumulation: sum c_k T^k
inline LinearMap poly_apply_naive(const multiform::Poly& f, const LinearMap& t) {
    LinearMap acc = LinearMap::zeros(t.rows(), t.rows(), t.kind());
    LinearMap power = LinearMap::identity(t.rows(), t.kind());
    for (int k = 0; k <= f.degree(); ++k) {
        acc = acc + power.scaled(f.coeff(k));
        power = power * t;
    }
    return acc;
}

}  // namespace oracle
