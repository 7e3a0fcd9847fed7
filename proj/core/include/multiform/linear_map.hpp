#pragma once

#include <initializer_list>
#include <vector>

#include "multiform/scalar.hpp"

namespace multiform {

/// Dense matrix over one Scalar kind, row-major. Immutable by convention:
/// operations return fresh values. Represents the maps of the library
/// (witness maps, selfadjoint maps, transition matrices) as well as
/// subspace bases (columns) and coordinate vectors (single column).
class LinearMap {
public:
    LinearMap() : rows_(0), cols_(0), kind_(Kind::Q) {}
    LinearMap(int rows, int cols, Kind kind);

    static LinearMap identity(int n, Kind kind);
    static LinearMap zeros(int rows, int cols, Kind kind);
    static LinearMap from_rows(Kind kind, std::initializer_list<std::initializer_list<long>> rows);
    static LinearMap column(const std::vector<Scalar>& v);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Kind kind() const { return kind_; }

    const Scalar& at(int i, int j) const { return entries_[static_cast<std::size_t>(i) * cols_ + j]; }
    Scalar& at(int i, int j) { return entries_[static_cast<std::size_t>(i) * cols_ + j]; }

    LinearMap operator*(const LinearMap& rhs) const;
    LinearMap operator+(const LinearMap& rhs) const;
    LinearMap operator-(const LinearMap& rhs) const;
    LinearMap operator-() const;
    LinearMap scaled(const Scalar& c) const;
    LinearMap transpose() const;
    LinearMap convert_to(Kind k) const;

    std::vector<Scalar> col_vector(int j) const;
    LinearMap block(int r0, int c0, int h, int w) const;
    void set_block(int r0, int c0, const LinearMap& b);
    static LinearMap hstack(const std::vector<LinearMap>& parts);

    double max_abs() const;
    double inf_norm() const;
    bool is_square() const { return rows_ == cols_; }

    friend bool operator==(const LinearMap& a, const LinearMap& b);

    std::vector<Scalar> apply(const std::vector<Scalar>& v) const;

private:
    int rows_, cols_;
    Kind kind_;
    std::vector<Scalar> entries_;
};

double max_abs_diff(const LinearMap& a, const LinearMap& b);
bool approx_eq(const LinearMap& a, const LinearMap& b, const TolerancePolicy& pol);

/// Row-reduced echelon form with full pivoting by magnitude.
struct Echelon {
    LinearMap rref;              // reduced rows, original column order
    std::vector<int> pivot_cols; // pivot column of row r, in elimination order
};

/// forced_nullity >= 0 stops elimination once cols - #pivots == forced_nullity,
/// regardless of pivot magnitude (used where the nullity is known a priori and
/// the matrix is numerically fuzzy). forced_nullity < 0 uses the tolerance.
Echelon echelon(const LinearMap& a, const TolerancePolicy& pol, int forced_nullity = -1);

int rank(const LinearMap& a, const TolerancePolicy& pol);

/// Columns form a basis of the null space.
LinearMap kernel_basis(const LinearMap& a, const TolerancePolicy& pol, int forced_nullity = -1);

LinearMap inverse(const LinearMap& a, const TolerancePolicy& pol);

Scalar det(const LinearMap& a);

/// Solves A X = B for full-column-rank A (rows >= cols). The system must be
/// consistent: surplus rows are checked against the tolerance (exactly for
/// exact kinds) and throw SingularMatrix otherwise. residual_out, when given,
/// receives the surplus-row mismatch instead of throwing.
LinearMap solve_consistent(const LinearMap& a, const LinearMap& b, const TolerancePolicy& pol,
                           double* residual_out = nullptr);

LinearMap pow_int(const LinearMap& a, long e, const TolerancePolicy& pol);

/// inf-norm condition estimate; +inf when singular.
double condition_estimate(const LinearMap& a, const TolerancePolicy& pol);

}  // namespace multiform
