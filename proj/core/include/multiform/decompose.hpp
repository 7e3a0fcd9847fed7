#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "multiform/multi_form.hpp"

namespace multiform {

/// Internal direct-sum decomposition of a form: block subspaces plus the
/// radical part, all as column bases in the coordinates of the source form.
struct Decomposition {
    std::vector<LinearMap> blocks;
    LinearMap radical_basis;
    int dim = 0;
    Kind kind = Kind::Q;
};

/// Structural validity: bases jointly independent and spanning, every
/// coefficient touching two different parts (or the radical part at all)
/// vanishes. require_nonzero_blocks additionally rejects zero summands.
/// Throws MixedBlockNonzero / DimensionMismatch on violation.
void validate_decomposition(const MultiForm& f, const Decomposition& d, const TolerancePolicy& pol,
                            bool require_nonzero_blocks);

/// (complement basis, radical basis): F = F' + 0 with F' the restriction to
/// the complement, which has an empty radical of its own.
std::pair<LinearMap, LinearMap> split_radical(const MultiForm& f, const TolerancePolicy& pol);

/// The congruence between the restrictions of F to two complements of its
/// radical, built by aligning the bases modulo the radical. Throws
/// NotAComplement when a basis does not complement the radical.
LinearMap radical_complement_congruence(const MultiForm& f, const LinearMap& basis_a,
                                        const LinearMap& basis_b, const TolerancePolicy& pol);

/// Sufficient, basis-dependent splitter: connected components of the index
/// support graph. Components touching no nonzero coefficient become the
/// radical part. Never merges blocks the basis exhibits as split.
Decomposition support_blocks(const MultiForm& f, const TolerancePolicy& pol);

/// Number of nonzero summands support_blocks finds.
int count_nonzero_summands(const MultiForm& f, const TolerancePolicy& pol);

struct Alignment {
    std::vector<int> permutation;     // D1 block p corresponds to D2 block permutation[p]
    std::vector<LinearMap> block_maps; // congruence from F|U_p to F|V_{perm[p]}
};

/// Matches two decompositions of the same form with nonzero indecomposable
/// blocks: normalizes the transition matrix between the concatenated bases to
/// identity diagonal blocks (working modulo the radical) and demands that the
/// off-diagonal blocks vanish. Throws BlockCountMismatch when the block
/// structure cannot correspond, OffDiagonalNonzero when a coupling survives.
Alignment align_decompositions(const MultiForm& f, const Decomposition& d1, const Decomposition& d2,
                               const TolerancePolicy& pol);

/// Sufficient indecomposability certificate: the span of all two-slot slices
/// of F has rank above the ceiling any nontrivial splitting permits
/// (dim^2 - 2(dim-1)). A `false` answer is inconclusive.
bool certify_indecomposable_by_slices(const MultiForm& f, const TolerancePolicy& pol);

}  // namespace multiform
