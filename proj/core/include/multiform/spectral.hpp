#pragma once

#include <vector>

#include "multiform/linear_map.hpp"
#include "multiform/poly.hpp"
#include "multiform/scalar.hpp"

namespace multiform {

/// One spectral group of a square matrix: a single eigenvalue (complex mode,
/// or a real eigenvalue in real mode) or a conjugate pair a +- ib with b > 0,
/// together with its invariant subspace.
struct SpectralGroup {
    bool pair = false;
    Scalar a;            // the eigenvalue itself, or the real part for pairs
    Scalar b_squared;    // pairs: b^2, exactly representable even when b is not
    double b_approx = 0; // pairs: numeric b > 0
    int multiplicity = 0;  // subspace dimension (2k for a pair of complex multiplicity k)
    LinearMap basis;       // dim x multiplicity
    LinearMap restriction; // multiplicity x multiplicity in the column basis
};

struct SpectralSplit {
    Kind kind = Kind::Q;
    int dim = 0;
    std::vector<SpectralGroup> groups;
};

enum class SplitMode { Complex, Real };

struct SpectralOptions {
    TolerancePolicy pol;
    /// Float eigenvalues within this relative distance fall into one group.
    /// Looser than the equality tolerance on purpose: the block-splitting
    /// argument only needs groups with disjoint spectra.
    double cluster_rel = 1e-6;
};

/// Decomposes the space into invariant subspaces per eigenvalue group.
/// Complex mode: one group per distinct eigenvalue, generalized eigenspaces.
/// Real mode: one group per real eigenvalue or conjugate pair.
/// Exact kinds: eigenvalues from the characteristic polynomial; throws
/// EigenvalueNotFound when it does not split over the field.
SpectralSplit spectral_split(const LinearMap& t, SplitMode mode, const SpectralOptions& opt = {});

/// Truncated binomial series of x^(-1/m) at lambda: returns f with
/// f(T)^m * T = I for any T whose single eigenvalue is lambda (nilpotency
/// degree at most the order of T). Exact kinds throw NoRootInField when
/// lambda^(-1/m) leaves the field.
Poly inverse_root_poly_complex(const LinearMap& t, const Scalar& lambda, int m);

/// Real-coefficient f with f(T)^m * T = I for a real T with one positive
/// eigenvalue or one conjugate pair. The pair construction substitutes a
/// polynomial p with p(T)^2 = -I for the imaginary unit, built by the affine
/// shift (x-a)/b followed by rounds of x -> (3x + x^3)/2 that strangle the
/// nilpotent part. rounds_out reports the number of such rounds.
Poly inverse_root_poly_real(const LinearMap& t, const SpectralGroup& group, int m,
                            int* rounds_out = nullptr);

/// Monic characteristic polynomial, exact kinds only.
Poly char_poly(const LinearMap& t);

struct RootMultiplicity {
    Scalar value;
    int multiplicity;
};

struct QuadraticFactor {
    Scalar trace;  // 2a
    Scalar norm;   // a^2 + b^2
    int multiplicity;
};

/// Roots of a monic exact polynomial found by divisor enumeration of the
/// integer-scaled coefficients plus float-seeded rationalization, each
/// verified exactly. allow_quadratics additionally extracts irreducible
/// real quadratic factors (conjugate pairs). complete reports whether the
/// whole degree was accounted for.
struct ExactSpectrum {
    std::vector<RootMultiplicity> roots;
    std::vector<QuadraticFactor> quadratics;
    bool complete = false;
};

ExactSpectrum exact_spectrum(const Poly& p, bool allow_quadratics,
                             const std::vector<std::complex<double>>& float_seeds = {});

}  // namespace multiform
