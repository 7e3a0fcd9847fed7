#pragma once

#include <vector>

#include "multiform/decompose.hpp"
#include "multiform/multi_form.hpp"
#include "multiform/poly.hpp"
#include "multiform/spectral.hpp"

namespace multiform {

struct SelfadjointReport {
    bool ok = false;
    // witness on failure: slots whose contractions disagree, and where
    int slot_a = -1;
    int slot_b = -1;
    std::vector<int> index;
    double max_residual = 0.0;
};

/// Whether tau can be moved between any two slots of G without changing the
/// value. By default slot 0 is compared against every other slot (enough by
/// transitivity); all_pairs checks every pair.
SelfadjointReport is_selfadjoint(const MultiForm& g, const LinearMap& tau,
                                 const TolerancePolicy& pol, bool all_pairs = false);

/// Selfadjointness is preserved under polynomials: f(tau) stays G-selfadjoint.
/// Test hook; expected true whenever tau is G-selfadjoint.
bool polynomial_closure(const MultiForm& g, const LinearMap& tau, const Poly& f,
                        const TolerancePolicy& pol);

/// Constructive block splitting: in the basis adapted to the spectral split
/// of a G-selfadjoint map, every coefficient coupling two groups vanishes.
/// Verifies that on the coefficients and returns the block decomposition.
/// Throws MixedBlockNonzero when a coupling survives (a violated
/// precondition upstream). max_mixed_out reports the largest mixed residual.
Decomposition direct_sum_from_split(const MultiForm& g, const SpectralSplit& split,
                                    const TolerancePolicy& pol, double* max_mixed_out = nullptr);

}  // namespace multiform
