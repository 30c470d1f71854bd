// The framing-matrix calculus: trivialized framings as full-rank n x N
// matrices, reduction to the standard projection [I_n | 0] by column
// transvections only, the GL-action, the two stabilization maps (which
// commute because they add coordinates on opposite sides), and the external
// product with its block shuffle.
#pragma once

#include <utility>
#include <vector>

#include "milnork/field.hpp"

namespace milnork {

class Matrix {
public:
    Matrix() = default;
    Matrix(FieldPtr k, int rows, int cols)
        : k_(std::move(k)), rows_(rows), cols_(cols),
          a_(static_cast<size_t>(rows) * static_cast<size_t>(cols), FieldElement::zero(k_)) {}

    static Matrix identity(const FieldPtr& k, int n) {
        Matrix m(k, n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = FieldElement::one(k);
        return m;
    }

    /// [I_n | 0] with `cols` total columns.
    static Matrix projection(const FieldPtr& k, int n, int cols) {
        Matrix m(k, n, cols);
        for (int i = 0; i < n; ++i) m.at(i, i) = FieldElement::one(k);
        return m;
    }

    const FieldPtr& field() const { return k_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }

    FieldElement& at(int r, int c) { return a_[static_cast<size_t>(r) * cols_ + c]; }
    const FieldElement& at(int r, int c) const { return a_[static_cast<size_t>(r) * cols_ + c]; }

    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw DomainError("matrix dimension mismatch in product");
        Matrix out(a.k_, a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int l = 0; l < a.cols_; ++l) {
                const FieldElement& x = a.at(i, l);
                if (x.is_zero()) continue;
                for (int j = 0; j < b.cols_; ++j) out.at(i, j) += x * b.at(l, j);
            }
        return out;
    }

    friend Matrix direct_sum(const Matrix& a, const Matrix& b) {
        Matrix out(a.k_, a.rows_ + b.rows_, a.cols_ + b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int j = 0; j < a.cols_; ++j) out.at(i, j) = a.at(i, j);
        for (int i = 0; i < b.rows_; ++i)
            for (int j = 0; j < b.cols_; ++j) out.at(a.rows_ + i, a.cols_ + j) = b.at(i, j);
        return out;
    }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }
    bool operator!=(const Matrix& o) const { return !(*this == o); }

    int rank() const {
        Matrix m = *this;
        int r = 0;
        for (int c = 0; c < cols_ && r < rows_; ++c) {
            int piv = -1;
            for (int i = r; i < rows_; ++i)
                if (!m.at(i, c).is_zero()) {
                    piv = i;
                    break;
                }
            if (piv < 0) continue;
            for (int j = 0; j < cols_; ++j) std::swap(m.at(piv, j), m.at(r, j));
            FieldElement inv = m.at(r, c).inverse();
            for (int i = r + 1; i < rows_; ++i) {
                FieldElement factor = m.at(i, c) * inv;
                if (factor.is_zero()) continue;
                for (int j = c; j < cols_; ++j) m.at(i, j) -= factor * m.at(r, j);
            }
            ++r;
        }
        return r;
    }

private:
    FieldPtr k_;
    int rows_ = 0, cols_ = 0;
    std::vector<FieldElement> a_;
};

/// Elementary column operation c_dst <- c_dst + lambda * c_src (det 1).
struct Transvection {
    int src = 0;
    int dst = 0;
    FieldElement lambda;
};

inline void apply_transvection(Matrix& m, const Transvection& t) {
    if (t.src == t.dst) throw DomainError("transvection indices must differ");
    for (int i = 0; i < m.rows(); ++i) m.at(i, t.dst) += t.lambda * m.at(i, t.src);
}

/// The N x N matrix E with A*E realizing the column operation.
inline Matrix transvection_matrix(const FieldPtr& k, int n, const Transvection& t) {
    Matrix e = Matrix::identity(k, n);
    e.at(t.src, t.dst) = t.lambda;
    return e;
}

/// Column-reduces a full-rank n x N matrix (N > n) to [I_n | 0] using
/// transvections only; returns the script, at most N + 2 operations per row.
/// Pivots are realized through a spare column, which is why N = n is
/// rejected: without the extra column, matrices of non-unit determinant
/// cannot be reduced by determinant-1 operations.
inline std::vector<Transvection> reduce_to_projection(const Matrix& a) {
    const int n = a.rows(), N = a.cols();
    const FieldPtr& k = a.field();
    if (N <= n) throw DomainError("reduction requires more columns than rows (N > n)");
    Matrix m = a;
    std::vector<Transvection> ops;
    auto apply = [&](int src, int dst, const FieldElement& lambda) {
        if (lambda.is_zero()) return;
        Transvection t{src, dst, lambda};
        apply_transvection(m, t);
        ops.push_back(std::move(t));
    };
    const FieldElement one = FieldElement::one(k);
    for (int i = 0; i < n; ++i) {
        if (m.at(i, i).is_zero()) {
            int piv = -1;
            for (int j = i + 1; j < N; ++j)
                if (!m.at(i, j).is_zero()) {
                    piv = j;
                    break;
                }
            if (piv < 0) throw DomainError("matrix is rank deficient");
            apply(piv, i, one);
        }
        FieldElement pivot = m.at(i, i);
        if (!pivot.is_one()) {
            int s = i + 1;  // spare column, exists since N > n > i
            apply(i, s, (one - m.at(i, s)) * pivot.inverse());  // row i entry of c_s becomes 1
            apply(s, i, one - pivot);                           // pivot becomes 1
        }
        for (int j = 0; j < N; ++j) {
            if (j == i) continue;
            if (!m.at(i, j).is_zero()) apply(i, j, -m.at(i, j));
        }
    }
    return ops;
}

/// (M*A, M*v) for invertible M; rank is preserved.
inline std::pair<Matrix, Matrix> apply_gl(const Matrix& gl, const Matrix& a, const Matrix& v) {
    if (gl.rows() != gl.cols()) throw DomainError("GL element must be square");
    if (gl.rank() != gl.rows()) throw DomainError("singular matrix is not in GL_n");
    if (gl.cols() != a.rows() || gl.cols() != v.rows() || v.cols() != 1)
        throw DomainError("GL action dimension mismatch");
    return {gl * a, gl * v};
}

/// Stabilization along n: a fresh coordinate is prepended on both sides
/// (leading 1 block); the new section slot is a formal zero at matrix level.
inline std::pair<Matrix, Matrix> stabilize_n(const Matrix& a, const Matrix& v) {
    const FieldPtr& k = a.field();
    Matrix a2(k, a.rows() + 1, a.cols() + 1);
    a2.at(0, 0) = FieldElement::one(k);
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) a2.at(i + 1, j + 1) = a.at(i, j);
    Matrix v2(k, v.rows() + 1, 1);
    for (int i = 0; i < v.rows(); ++i) v2.at(i + 1, 0) = v.at(i, 0);
    return {std::move(a2), std::move(v2)};
}

/// Stabilization along N: one zero column appended on the right.
inline Matrix stabilize_N(const Matrix& a) {
    Matrix a2(a.field(), a.rows(), a.cols() + 1);
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) a2.at(i, j) = a.at(i, j);
    return a2;
}

/// The block shuffle T_{n,N,n',N'}: a permutation matrix on n+N+n'+N'
/// coordinates rearranging the blocks (n, n', N, N') into (n, N, n', N').
inline Matrix external_shuffle(const FieldPtr& k, int n, int N, int np, int Np) {
    const int total = n + N + np + Np;
    Matrix t(k, total, total);
    auto old_index = [&](int c) {
        if (c < n) return c;
        if (c < n + np) return n + N + (c - n);
        if (c < n + np + N) return n + (c - n - np);
        return n + N + np + (c - n - np - N);
    };
    for (int c = 0; c < total; ++c) t.at(old_index(c), c) = FieldElement::one(k);
    return t;
}

/// External product of framings at levels (n, N) and (n', N'): the matrices
/// are n x (n+N) and n' x (n'+N'), and the result (A + A') * T is
/// (n+n') x (n+n'+N+N'). Projections multiply to projections.
inline Matrix external_product(const Matrix& a, const Matrix& ap) {
    if (a.cols() < a.rows() || ap.cols() < ap.rows())
        throw DomainError("external product needs level-shaped matrices (cols >= rows)");
    if (!same_field(a.field(), ap.field())) throw DomainError("external product field mismatch");
    const int n = a.rows(), N = a.cols() - a.rows();
    const int np = ap.rows(), Np = ap.cols() - ap.rows();
    return direct_sum(a, ap) * external_shuffle(a.field(), n, N, np, Np);
}

}  // namespace milnork
