#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace multiform {

/// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct KindMismatch : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

struct SingularMatrix : Error {
    using Error::Error;
};

/// An exact field does not contain the requested root. This is a normal
/// outcome for exact kinds; drivers catch it and rerun in floating point.
struct NoRootInField : Error {
    using Error::Error;
};

/// The characteristic polynomial does not split over the requested exact
/// field (or the float eigensolver failed to produce a usable spectrum).
struct EigenvalueNotFound : Error {
    using Error::Error;
};

/// Real inverse-root construction was handed a negative real eigenvalue.
/// Sign handling belongs to the caller (the sign map of the real driver).
struct NegativeRealEigenvalue : Error {
    using Error::Error;
};

struct NumericalInstability : Error {
    using Error::Error;
};

struct WitnessInvalid : Error {
    WitnessInvalid(std::string msg, std::vector<int> reordering, std::vector<int> index)
        : Error(std::move(msg)), reordering(std::move(reordering)), index(std::move(index)) {}
    std::vector<int> reordering;
    std::vector<int> index;
};

struct SelfadjointnessViolated : Error {
    SelfadjointnessViolated(std::string msg, int slot_a, int slot_b, std::vector<int> index)
        : Error(std::move(msg)), slot_a(slot_a), slot_b(slot_b), index(std::move(index)) {}
    int slot_a;
    int slot_b;
    std::vector<int> index;
};

/// A coefficient coupling two different invariant subspaces did not vanish.
/// Signals a violated precondition upstream (map not selfadjoint, or
/// eigenvalue collision between groups).
struct MixedBlockNonzero : Error {
    MixedBlockNonzero(std::string msg, std::vector<int> index)
        : Error(std::move(msg)), index(std::move(index)) {}
    std::vector<int> index;
};

struct InconsistentSignMap : Error {
    using Error::Error;
};

struct NotAComplement : Error {
    using Error::Error;
};

struct BlockCountMismatch : Error {
    using Error::Error;
};

/// Alignment of two decompositions found a non-vanishing off-diagonal block
/// of the transition matrix: either a block was decomposable after all, or
/// the inputs do not decompose the same form.
struct OffDiagonalNonzero : Error {
    OffDiagonalNonzero(std::string msg, int block_p, int block_q)
        : Error(std::move(msg)), block_p(block_p), block_q(block_q) {}
    int block_p;
    int block_q;
};

/// Random generation kept drawing degenerate data past the retry budget.
struct SingularDraw : Error {
    using Error::Error;
};

}  // namespace multiform
