#pragma once

#include <optional>
#include <vector>

#include "multiform/multi_form.hpp"
#include "multiform/spectral.hpp"

namespace multiform {

/// Symmetric-equivalence witness: n invertible maps phi_1..phi_n with
/// F(u_1,...,u_n) = G(phi_{i_1} u_1, ..., phi_{i_n} u_n) for every
/// reordering i_1,...,i_n.
struct Witness {
    MultiForm source;  // F
    MultiForm target;  // G
    std::vector<LinearMap> maps;
};

struct WitnessViolation {
    std::vector<int> reordering;  // slot k received map reordering[k]
    std::vector<int> index;       // basis tuple where the values differ
    Scalar lhs;                   // F at the tuple
    Scalar rhs;                   // reordered pullback of G at the tuple
};

struct WitnessReport {
    bool ok = false;
    double max_residual = 0.0;
    std::optional<WitnessViolation> violation;
};

/// Verifies the defining identity. All n! reorderings are swept for n <= 4
/// or when full_factorial is set; otherwise the identity assignment and all
/// its transpositions.
WitnessReport check_witness(const Witness& w, const TolerancePolicy& pol,
                            bool full_factorial = false);

struct SignedBlock {
    LinearMap basis;  // columns, in target coordinates
    int sign;         // +1 or -1
};

/// Congruence certificate: F = (+-G restricted per block) pulled back
/// through psi on every slot. The complex route always produces one block
/// with sign +1.
struct SignedCongruence {
    LinearMap psi;
    std::vector<SignedBlock> blocks;
};

struct SymmetrizeOptions {
    TolerancePolicy pol;
    double cluster_rel = 1e-6;      // eigenvalue grouping, see SpectralOptions
    double condition_limit = 1e12;  // float condition guard on maps
    bool verify_each_step = false;  // re-check the witness after every round
};

/// Turns a witness over a complex kind (C64 or Qi) into a single congruence.
/// Each round equalizes one more map: tau = phi * phi_{t+1}^{-1} is
/// G-selfadjoint, a per-spectral-group polynomial root gives rho with
/// rho^{t+1} = tau^{-1}, and rho*phi replaces the equalized prefix.
/// Exact kinds throw NoRootInField when a needed root leaves the field.
LinearMap symmetrize_complex(const Witness& w, const SymmetrizeOptions& opt = {});

/// Real variant: spectral groups are real eigenvalues or conjugate pairs,
/// and a sign map absorbs negative real eigenvalues before root extraction.
/// Signs met at the last round fold into the certificate blocks.
SignedCongruence symmetrize_real(const Witness& w, const SymmetrizeOptions& opt = {});

/// Max |F(tuple) - G_signed(psi tuple)| over all basis tuples, where
/// G_signed applies the block signs to G. Zero (exact kinds) or below
/// tolerance means the certificate checks out.
double verify_congruence(const MultiForm& f, const MultiForm& g, const LinearMap& psi,
                         const std::vector<SignedBlock>* blocks, const TolerancePolicy& pol);

/// G with each block of the certificate scaled by its sign.
MultiForm signed_form(const MultiForm& g, const std::vector<SignedBlock>& blocks,
                      const TolerancePolicy& pol);

struct SymmetrizeOutcome {
    SignedCongruence cert;
    Kind executed_kind;  // differs from the witness kind after a float rerun
};

/// Driver that dispatches on the witness kind and, when exact arithmetic
/// aborts with NoRootInField or EigenvalueNotFound, restarts the whole
/// computation in the float fallback kind. No mixed precision mid-run.
SymmetrizeOutcome symmetrize_with_fallback(const Witness& w, const SymmetrizeOptions& opt = {});

/// Kind conversion of a whole witness (used by the fallback driver and CLI).
Witness convert_witness(const Witness& w, Kind k);

}  // namespace multiform
