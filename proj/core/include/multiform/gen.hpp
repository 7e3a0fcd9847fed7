#pragma once

#include <cstdint>
#include <vector>

#include "multiform/decompose.hpp"
#include "multiform/symmetrize.hpp"

namespace multiform {

/// Deterministic splittable PRNG (splitmix64). Same seed, same platform,
/// bit-identical outputs — reproducibility is part of the test contract.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();
    double next_double();              // [0, 1)
    long next_int(long lo, long hi);   // inclusive bounds
    bool next_bool() { return (next() & 1UL) != 0; }
    SplitMix64 split();

private:
    std::uint64_t state_;
};

/// One eigenvalue group of the hidden selfadjoint map: a scalar (real,
/// negative real, or complex depending on the kind) or a conjugate pair
/// a +- ib with b > 0.
struct EigenvalueSpec {
    bool pair = false;
    Scalar a;
    Scalar b;  // pairs only

    static EigenvalueSpec real_value(const Scalar& v) { return {false, v, Scalar()}; }
    static EigenvalueSpec conjugate_pair(const Scalar& a, const Scalar& b) { return {true, a, b}; }
};

struct GenSpec {
    std::uint64_t seed = 1;
    int arity = 3;
    Kind kind = Kind::R64;
    std::vector<int> block_dims;
    std::vector<EigenvalueSpec> eigenvalues;  // one per block (witness instances)
    int radical_dim = 0;                      // decomposable instances
    bool conjugate = true;                    // hide the structure by a random basis change
};

/// Witness with hidden spectral structure: G is a direct sum of dense random
/// blocks, tau acts as the requested eigenvalue per block (so it is
/// G-selfadjoint by construction), and the maps are tau-powers of one random
/// bijection. check_witness passes by construction and is asserted before
/// returning. Real-kind exponents are arranged so that a -1 sign block comes
/// out of the reduction exactly when the menu holds a negative real
/// eigenvalue.
Witness gen_witness(const GenSpec& spec);

/// (G, tau) with tau G-selfadjoint and pairwise disjoint spectral groups.
struct SelfadjointPair {
    MultiForm form;
    LinearMap tau;
};
SelfadjointPair gen_selfadjoint_pair(const GenSpec& spec);

/// A decomposable form with two decompositions of it: the construction one
/// and a disguised copy (block permutation, within-block basis changes,
/// radical shears) whose hidden permutation the alignment must recover.
struct DecomposableInstance {
    MultiForm form;
    Decomposition d1;
    Decomposition d2;
    std::vector<int> hidden_perm;  // d1 block p sits at d2 position hidden_perm[p]
};
DecomposableInstance gen_decomposable(const GenSpec& spec);

}  // namespace multiform
