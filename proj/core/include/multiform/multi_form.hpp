#pragma once

#include <optional>
#include <vector>

#include "multiform/linear_map.hpp"
#include "multiform/scalar.hpp"

namespace multiform {

/// Permutation of slot positions 0..n-1.
class Permutation {
public:
    explicit Permutation(std::vector<int> images);
    static Permutation identity(int n);
    static Permutation transposition(int n, int a, int b);

    int size() const { return static_cast<int>(images_.size()); }
    int operator()(int i) const { return images_[static_cast<std::size_t>(i)]; }
    const std::vector<int>& images() const { return images_; }

    /// Apply this, then next:  (this.then(next))(k) = next(this(k)).
    Permutation then(const Permutation& next) const;
    Permutation inverse() const;
    int sign() const;

    friend bool operator==(const Permutation&, const Permutation&) = default;

private:
    std::vector<int> images_;
};

/// Dense n-linear form on an m-dimensional space in a fixed basis.
/// coeffs[(i1,...,in)] = F(u_{i1},...,u_{in}); row-major, last index fastest.
class MultiForm {
public:
    MultiForm() : MultiForm(2, 0, Kind::Q) {}
    MultiForm(int arity, int dim, Kind kind);

    int arity() const { return arity_; }
    int dim() const { return dim_; }
    Kind kind() const { return kind_; }
    std::size_t size() const { return coeffs_.size(); }

    const Scalar& at(const std::vector<int>& idx) const;
    Scalar& at(const std::vector<int>& idx);
    const Scalar& at_flat(std::size_t flat) const { return coeffs_[flat]; }
    Scalar& at_flat(std::size_t flat) { return coeffs_[flat]; }

    std::size_t flatten(const std::vector<int>& idx) const;
    std::vector<int> unflatten(std::size_t flat) const;

    MultiForm convert_to(Kind k) const;
    MultiForm scaled(const Scalar& c) const;
    MultiForm operator+(const MultiForm& rhs) const;
    MultiForm operator-(const MultiForm& rhs) const;
    bool is_zero() const;
    double max_abs() const;

    friend bool operator==(const MultiForm&, const MultiForm&);

private:
    int arity_, dim_;
    Kind kind_;
    std::vector<Scalar> coeffs_;
};

/// Advances a multi-index odometer-style; false once it wraps to all zeros.
bool next_index(std::vector<int>& idx, int dim);

double max_abs_diff(const MultiForm& a, const MultiForm& b);
bool approx_eq(const MultiForm& a, const MultiForm& b, const TolerancePolicy& pol);

/// F(x1,...,xn) for coordinate vectors of length dim.
Scalar eval(const MultiForm& f, const std::vector<std::vector<Scalar>>& xs);

/// F^sigma with F^sigma(u_1,...,u_n) = F(u_{sigma(1)},...,u_{sigma(n)}).
MultiForm permute_slots(const MultiForm& f, const Permutation& sigma);

/// Feeds M through one slot: result(...,i,...) = sum_j F(...,j,...) M(j,i),
/// i.e. eval(result, xs) = eval(F, xs with M*xs[slot]).
MultiForm contract_slot(const MultiForm& f, int slot, const LinearMap& m);

/// Simultaneous contraction of every slot with the transition matrix C whose
/// columns are the new basis vectors in old coordinates.
MultiForm change_basis(const MultiForm& f, const LinearMap& c);

/// Like change_basis but with an m x d matrix: the restriction of F to the
/// subspace spanned by the columns, expressed in that column basis.
MultiForm restrict_to_subspace(const MultiForm& f, const LinearMap& basis);

/// Pullback through one map per slot: eval(result, xs) = eval(F, maps[k]*xs[k]).
MultiForm pullback(const MultiForm& f, const std::vector<LinearMap>& maps);

MultiForm direct_sum(const MultiForm& f, const MultiForm& g);

/// Basis (columns) of the radical: all u with F(..., u, ...) = 0 against
/// every slot and all arguments.
LinearMap radical(const MultiForm& f, const TolerancePolicy& pol);

struct EpsilonSymmetryReport {
    bool symmetric = false;
    // witness transposition (adjacent slots) and index when not symmetric
    std::optional<int> violating_slot;
    std::optional<std::vector<int>> violating_index;
};

/// Signs are given per adjacent transposition (t, t+1), t = 0..n-2. Throws
/// InconsistentSignMap when they do not extend to a sign character of S_n.
EpsilonSymmetryReport is_epsilon_symmetric(const MultiForm& f, const std::vector<int>& generator_signs,
                                           const TolerancePolicy& pol);

}  // namespace multiform
