#include "multiform/linear_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace multiform {

LinearMap::LinearMap(int rows, int cols, Kind kind)
    : rows_(rows), cols_(cols), kind_(kind),
      entries_(static_cast<std::size_t>(rows) * cols, Scalar::zero(kind)) {
    if (rows < 0 || cols < 0) throw DimensionMismatch("negative matrix dimension");
}

LinearMap LinearMap::identity(int n, Kind kind) {
    LinearMap m(n, n, kind);
    for (int i = 0; i < n; ++i) m.at(i, i) = Scalar::one(kind);
    return m;
}

LinearMap LinearMap::zeros(int rows, int cols, Kind kind) { return LinearMap(rows, cols, kind); }

LinearMap LinearMap::from_rows(Kind kind, std::initializer_list<std::initializer_list<long>> rows) {
    int r = static_cast<int>(rows.size());
    int c = r == 0 ? 0 : static_cast<int>(rows.begin()->size());
    LinearMap m(r, c, kind);
    int i = 0;
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != c) throw DimensionMismatch("ragged rows");
        int j = 0;
        for (long v : row) m.at(i, j++) = Scalar::from_int(v, kind);
        ++i;
    }
    return m;
}

LinearMap LinearMap::column(const std::vector<Scalar>& v) {
    if (v.empty()) throw DimensionMismatch("empty column");
    LinearMap m(static_cast<int>(v.size()), 1, v[0].kind());
    for (int i = 0; i < m.rows(); ++i) m.at(i, 0) = v[i];
    return m;
}

static void check_kind(const LinearMap& a, const LinearMap& b) {
    if (a.kind() != b.kind()) throw KindMismatch("matrix kind mismatch");
}

LinearMap LinearMap::operator*(const LinearMap& rhs) const {
    check_kind(*this, rhs);
    if (cols_ != rhs.rows()) throw DimensionMismatch("matrix product shape mismatch");
    LinearMap out(rows_, rhs.cols(), kind_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const Scalar& aik = at(i, k);
            if (aik.is_zero()) continue;
            for (int j = 0; j < rhs.cols(); ++j)
                out.at(i, j) = out.at(i, j) + aik * rhs.at(k, j);
        }
    return out;
}

LinearMap LinearMap::operator+(const LinearMap& rhs) const {
    check_kind(*this, rhs);
    if (rows_ != rhs.rows() || cols_ != rhs.cols()) throw DimensionMismatch("matrix sum shape mismatch");
    LinearMap out(rows_, cols_, kind_);
    for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] = entries_[i] + rhs.entries_[i];
    return out;
}

LinearMap LinearMap::operator-(const LinearMap& rhs) const { return *this + (-rhs); }

LinearMap LinearMap::operator-() const {
    LinearMap out(rows_, cols_, kind_);
    for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] = -entries_[i];
    return out;
}

LinearMap LinearMap::scaled(const Scalar& c) const {
    LinearMap out(rows_, cols_, kind_);
    for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] = entries_[i] * c;
    return out;
}

LinearMap LinearMap::transpose() const {
    LinearMap out(cols_, rows_, kind_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
    return out;
}

LinearMap LinearMap::convert_to(Kind k) const {
    LinearMap out(rows_, cols_, k);
    for (std::size_t i = 0; i < entries_.size(); ++i) out.entries_[i] = entries_[i].convert_to(k);
    return out;
}

std::vector<Scalar> LinearMap::col_vector(int j) const {
    std::vector<Scalar> v;
    v.reserve(rows_);
    for (int i = 0; i < rows_; ++i) v.push_back(at(i, j));
    return v;
}

LinearMap LinearMap::block(int r0, int c0, int h, int w) const {
    if (r0 < 0 || c0 < 0 || r0 + h > rows_ || c0 + w > cols_) throw DimensionMismatch("block out of range");
    LinearMap out(h, w, kind_);
    for (int i = 0; i < h; ++i)
        for (int j = 0; j < w; ++j) out.at(i, j) = at(r0 + i, c0 + j);
    return out;
}

void LinearMap::set_block(int r0, int c0, const LinearMap& b) {
    if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_) throw DimensionMismatch("block out of range");
    for (int i = 0; i < b.rows(); ++i)
        for (int j = 0; j < b.cols(); ++j) at(r0 + i, c0 + j) = b.at(i, j);
}

LinearMap LinearMap::hstack(const std::vector<LinearMap>& parts) {
    if (parts.empty()) throw DimensionMismatch("hstack of nothing");
    int total = 0;
    for (const auto& p : parts) {
        if (p.rows() != parts[0].rows()) throw DimensionMismatch("hstack row mismatch");
        total += p.cols();
    }
    LinearMap out(parts[0].rows(), total, parts[0].kind());
    int c = 0;
    for (const auto& p : parts) {
        out.set_block(0, c, p);
        c += p.cols();
    }
    return out;
}

double LinearMap::max_abs() const {
    double m = 0.0;
    for (const auto& e : entries_) m = std::max(m, e.abs_approx());
    return m;
}

double LinearMap::inf_norm() const {
    double m = 0.0;
    for (int i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (int j = 0; j < cols_; ++j) s += at(i, j).abs_approx();
        m = std::max(m, s);
    }
    return m;
}

bool operator==(const LinearMap& a, const LinearMap& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_ || a.kind_ != b.kind_) return false;
    return a.entries_ == b.entries_;
}

std::vector<Scalar> LinearMap::apply(const std::vector<Scalar>& v) const {
    if (static_cast<int>(v.size()) != cols_) throw DimensionMismatch("apply shape mismatch");
    std::vector<Scalar> out(rows_, Scalar::zero(kind_));
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j) out[i] = out[i] + at(i, j) * v[j];
    return out;
}

double max_abs_diff(const LinearMap& a, const LinearMap& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("shape mismatch");
    double m = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) m = std::max(m, (a.at(i, j) - b.at(i, j)).abs_approx());
    return m;
}

bool approx_eq(const LinearMap& a, const LinearMap& b, const TolerancePolicy& pol) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j)
            if (!Scalar::approx_eq(a.at(i, j), b.at(i, j), pol)) return false;
    return true;
}

// ------------------------------------------------------------------
// elimination engine

namespace {

bool pivot_negligible(const Scalar& v, double threshold) {
    if (is_exact(v.kind())) return v.is_zero();
    return v.abs_approx() <= threshold;
}

}  // namespace

Echelon echelon(const LinearMap& a, const TolerancePolicy& pol, int forced_nullity) {
    LinearMap r = a;
    const int rows = r.rows(), cols = r.cols();
    double threshold = pol.abs + pol.rel * a.max_abs();
    std::vector<bool> col_used(cols, false);
    std::vector<int> pivot_cols;
    int row = 0;
    while (row < rows && static_cast<int>(pivot_cols.size()) < cols) {
        if (forced_nullity >= 0 && cols - static_cast<int>(pivot_cols.size()) == forced_nullity) break;
        // full pivoting: largest remaining entry
        int pi = -1, pj = -1;
        double best = -1.0;
        for (int i = row; i < rows; ++i)
            for (int j = 0; j < cols; ++j) {
                if (col_used[j]) continue;
                double m = r.at(i, j).abs_approx();
                if (m > best) {
                    best = m;
                    pi = i;
                    pj = j;
                }
            }
        if (pi < 0) break;
        if (forced_nullity < 0 && pivot_negligible(r.at(pi, pj), threshold)) break;
        if (r.at(pi, pj).is_zero()) break;  // forced mode still cannot pivot on exact zero
        if (pi != row)
            for (int j = 0; j < cols; ++j) std::swap(r.at(pi, j), r.at(row, j));
        Scalar inv = r.at(row, pj).inverse();
        for (int j = 0; j < cols; ++j) r.at(row, j) = r.at(row, j) * inv;
        for (int i = 0; i < rows; ++i) {
            if (i == row) continue;
            Scalar f = r.at(i, pj);
            if (f.is_zero()) continue;
            for (int j = 0; j < cols; ++j) r.at(i, j) = r.at(i, j) - f * r.at(row, j);
        }
        col_used[pj] = true;
        pivot_cols.push_back(pj);
        ++row;
    }
    return Echelon{std::move(r), std::move(pivot_cols)};
}

int rank(const LinearMap& a, const TolerancePolicy& pol) {
    return static_cast<int>(echelon(a, pol).pivot_cols.size());
}

LinearMap kernel_basis(const LinearMap& a, const TolerancePolicy& pol, int forced_nullity) {
    Echelon e = echelon(a, pol, forced_nullity);
    const int cols = a.cols();
    std::vector<bool> is_pivot(cols, false);
    for (int p : e.pivot_cols) is_pivot[p] = true;
    std::vector<int> free_cols;
    for (int j = 0; j < cols; ++j)
        if (!is_pivot[j]) free_cols.push_back(j);
    LinearMap basis(cols, static_cast<int>(free_cols.size()), a.kind());
    for (std::size_t k = 0; k < free_cols.size(); ++k) {
        int f = free_cols[k];
        basis.at(f, static_cast<int>(k)) = Scalar::one(a.kind());
        for (std::size_t r = 0; r < e.pivot_cols.size(); ++r)
            basis.at(e.pivot_cols[r], static_cast<int>(k)) = -e.rref.at(static_cast<int>(r), f);
    }
    return basis;
}

LinearMap inverse(const LinearMap& a, const TolerancePolicy& pol) {
    if (!a.is_square()) throw DimensionMismatch("inverse of non-square matrix");
    const int n = a.rows();
    LinearMap aug(n, 2 * n, a.kind());
    aug.set_block(0, 0, a);
    aug.set_block(0, n, LinearMap::identity(n, a.kind()));
    // restrict pivots to the left half by zero-extending: run elimination
    // manually so pivots never land in the identity part
    LinearMap r = aug;
    double threshold = pol.abs + pol.rel * a.max_abs();
    std::vector<bool> col_used(n, false);
    std::vector<int> pivot_cols;
    for (int row = 0; row < n; ++row) {
        int pi = -1, pj = -1;
        double best = -1.0;
        for (int i = row; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (col_used[j]) continue;
                double m = r.at(i, j).abs_approx();
                if (m > best) {
                    best = m;
                    pi = i;
                    pj = j;
                }
            }
        if (pi < 0 || pivot_negligible(r.at(pi, pj), threshold) || r.at(pi, pj).is_zero())
            throw SingularMatrix("matrix is singular");
        if (pi != row)
            for (int j = 0; j < 2 * n; ++j) std::swap(r.at(pi, j), r.at(row, j));
        Scalar inv = r.at(row, pj).inverse();
        for (int j = 0; j < 2 * n; ++j) r.at(row, j) = r.at(row, j) * inv;
        for (int i = 0; i < n; ++i) {
            if (i == row) continue;
            Scalar f = r.at(i, pj);
            if (f.is_zero()) continue;
            for (int j = 0; j < 2 * n; ++j) r.at(i, j) = r.at(i, j) - f * r.at(row, j);
        }
        col_used[pj] = true;
        pivot_cols.push_back(pj);
    }
    // row with pivot column p holds row p of the inverse
    LinearMap out(n, n, a.kind());
    for (int row = 0; row < n; ++row) {
        int p = pivot_cols[row];
        for (int j = 0; j < n; ++j) out.at(p, j) = r.at(row, n + j);
    }
    return out;
}

Scalar det(const LinearMap& a) {
    if (!a.is_square()) throw DimensionMismatch("det of non-square matrix");
    const int n = a.rows();
    LinearMap r = a;
    Scalar d = Scalar::one(a.kind());
    for (int col = 0; col < n; ++col) {
        int pi = -1;
        double best = -1.0;
        for (int i = col; i < n; ++i) {
            double m = r.at(i, col).abs_approx();
            if (!r.at(i, col).is_zero() && m > best) {
                best = m;
                pi = i;
            }
        }
        if (pi < 0) return Scalar::zero(a.kind());
        if (pi != col) {
            for (int j = 0; j < n; ++j) std::swap(r.at(pi, j), r.at(col, j));
            d = -d;
        }
        d = d * r.at(col, col);
        Scalar inv = r.at(col, col).inverse();
        for (int i = col + 1; i < n; ++i) {
            Scalar f = r.at(i, col) * inv;
            if (f.is_zero()) continue;
            for (int j = col; j < n; ++j) r.at(i, j) = r.at(i, j) - f * r.at(col, j);
        }
    }
    return d;
}

LinearMap solve_consistent(const LinearMap& a, const LinearMap& b, const TolerancePolicy& pol,
                           double* residual_out) {
    if (a.rows() != b.rows()) throw DimensionMismatch("solve shape mismatch");
    const int m = a.rows(), d = a.cols(), w = b.cols();
    LinearMap aug(m, d + w, a.kind());
    aug.set_block(0, 0, a);
    aug.set_block(0, d, b);
    // eliminate with pivots restricted to the first d columns
    LinearMap r = aug;
    double threshold = pol.abs + pol.rel * a.max_abs();
    std::vector<bool> col_used(d, false);
    std::vector<int> pivot_cols;
    int row = 0;
    for (; row < m && static_cast<int>(pivot_cols.size()) < d; ++row) {
        int pi = -1, pj = -1;
        double best = -1.0;
        for (int i = row; i < m; ++i)
            for (int j = 0; j < d; ++j) {
                if (col_used[j]) continue;
                double mag = r.at(i, j).abs_approx();
                if (mag > best) {
                    best = mag;
                    pi = i;
                    pj = j;
                }
            }
        if (pi < 0 || pivot_negligible(r.at(pi, pj), threshold) || r.at(pi, pj).is_zero()) break;
        if (pi != row)
            for (int j = 0; j < d + w; ++j) std::swap(r.at(pi, j), r.at(row, j));
        Scalar inv = r.at(row, pj).inverse();
        for (int j = 0; j < d + w; ++j) r.at(row, j) = r.at(row, j) * inv;
        for (int i = 0; i < m; ++i) {
            if (i == row) continue;
            Scalar f = r.at(i, pj);
            if (f.is_zero()) continue;
            for (int j = 0; j < d + w; ++j) r.at(i, j) = r.at(i, j) - f * r.at(row, j);
        }
        col_used[pj] = true;
        pivot_cols.push_back(pj);
    }
    if (static_cast<int>(pivot_cols.size()) < d) throw SingularMatrix("coefficient matrix lacks full column rank");
    // surplus rows are the consistency residual
    double residual = 0.0;
    for (int i = row; i < m; ++i)
        for (int j = 0; j < d + w; ++j) residual = std::max(residual, r.at(i, j).abs_approx());
    if (residual_out) {
        *residual_out = residual;
    } else if (residual > threshold) {
        throw SingularMatrix("inconsistent linear system");
    }
    LinearMap x(d, w, a.kind());
    for (std::size_t rr = 0; rr < pivot_cols.size(); ++rr)
        for (int j = 0; j < w; ++j) x.at(pivot_cols[rr], j) = r.at(static_cast<int>(rr), d + j);
    return x;
}

LinearMap pow_int(const LinearMap& a, long e, const TolerancePolicy& pol) {
    if (!a.is_square()) throw DimensionMismatch("pow of non-square matrix");
    LinearMap base = e < 0 ? inverse(a, pol) : a;
    unsigned long k = static_cast<unsigned long>(e < 0 ? -e : e);
    LinearMap acc = LinearMap::identity(a.rows(), a.kind());
    while (k > 0) {
        if (k & 1UL) acc = acc * base;
        base = base * base;
        k >>= 1UL;
    }
    return acc;
}

double condition_estimate(const LinearMap& a, const TolerancePolicy& pol) {
    try {
        LinearMap inv = inverse(a, pol);
        return a.inf_norm() * inv.inf_norm();
    } catch (const SingularMatrix&) {
        return std::numeric_limits<double>::infinity();
    }
}

}  // namespace multiform
