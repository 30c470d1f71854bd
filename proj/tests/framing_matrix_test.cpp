#include <gtest/gtest.h>

#include "milnork/framing_matrix.hpp"
#include "milnork/selftest.hpp"

using namespace milnork;

namespace {

FieldElement fe(const FieldPtr& k, int64_t n) { return FieldElement::from_int(k, n); }

Matrix from_rows(const FieldPtr& k, const std::vector<std::vector<int64_t>>& rows) {
    Matrix m(k, static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < rows[i].size(); ++j)
            m.at(static_cast<int>(i), static_cast<int>(j)) = fe(k, rows[i][j]);
    return m;
}

// Determinant by fraction-free-ish Gaussian elimination, used as the
// unimodularity oracle for transvection products.
FieldElement det_by_elimination(Matrix m) {
    const FieldPtr& k = m.field();
    FieldElement det = FieldElement::one(k);
    const int n = m.rows();
    for (int c = 0; c < n; ++c) {
        int piv = -1;
        for (int r = c; r < n; ++r)
            if (!m.at(r, c).is_zero()) {
                piv = r;
                break;
            }
        if (piv < 0) return FieldElement::zero(k);
        if (piv != c) {
            for (int j = 0; j < n; ++j) std::swap(m.at(piv, j), m.at(c, j));
            det = -det;
        }
        det = det * m.at(c, c);
        FieldElement inv = m.at(c, c).inverse();
        for (int r = c + 1; r < n; ++r) {
            FieldElement factor = m.at(r, c) * inv;
            if (factor.is_zero()) continue;
            for (int j = c; j < n; ++j) m.at(r, j) -= factor * m.at(c, j);
        }
    }
    return det;
}

Matrix transvection_product(const FieldPtr& k, int n, const std::vector<Transvection>& ops) {
    Matrix p = Matrix::identity(k, n);
    for (const auto& t : ops) p = p * transvection_matrix(k, n, t);
    return p;
}

}  // namespace

TEST(Reduce, PinnedScriptForOneByTwo) {
    auto F5 = prime_field(5);
    Matrix a = from_rows(F5, {{2, 0}});
    auto ops = reduce_to_projection(a);
    ASSERT_EQ(ops.size(), 3u);
    // c_2 += 3 c_1; c_1 += 4 c_2; c_2 += 4 c_1
    EXPECT_EQ(ops[0].src, 0);
    EXPECT_EQ(ops[0].dst, 1);
    EXPECT_EQ(ops[0].lambda, fe(F5, 3));
    EXPECT_EQ(ops[1].src, 1);
    EXPECT_EQ(ops[1].dst, 0);
    EXPECT_EQ(ops[1].lambda, fe(F5, 4));
    EXPECT_EQ(ops[2].src, 0);
    EXPECT_EQ(ops[2].dst, 1);
    EXPECT_EQ(ops[2].lambda, fe(F5, 4));
    Matrix m = a;
    for (const auto& t : ops) apply_transvection(m, t);
    EXPECT_EQ(m, Matrix::projection(F5, 1, 2));
}

TEST(Reduce, AlreadyReducedAndErrors) {
    auto F5 = prime_field(5);
    EXPECT_TRUE(reduce_to_projection(Matrix::projection(F5, 2, 4)).empty());
    // rank deficient
    EXPECT_THROW(reduce_to_projection(from_rows(F5, {{1, 2, 0}, {2, 4, 0}})), DomainError);
    // N = n leaves no spare column
    EXPECT_THROW(reduce_to_projection(from_rows(F5, {{2, 0}, {0, 1}})), DomainError);
}

TEST(Reduce, RandomizedWithUnimodularityOracle) {
    Rng rng(83);
    std::vector<FieldPtr> fields = {prime_field(2), prime_field(3), prime_field(5), prime_field(7)};
    for (int c = 0; c < 1000; ++c) {
        const FieldPtr& k = fields[c % fields.size()];
        int n = 1 + static_cast<int>(rng.below(4));
        int N = n + 1 + static_cast<int>(rng.below(static_cast<uint64_t>(7 - n)));
        Matrix a(k, n, N);
        do {
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < N; ++j) a.at(i, j) = random_element(rng, k);
        } while (a.rank() != n);
        auto ops = reduce_to_projection(a);
        EXPECT_LE(static_cast<int>(ops.size()), n * (N + 2));
        Matrix p = transvection_product(k, N, ops);
        EXPECT_EQ(a * p, Matrix::projection(k, n, N));
        EXPECT_TRUE(det_by_elimination(p).is_one());
        for (const auto& t : ops)
            EXPECT_TRUE(det_by_elimination(transvection_matrix(k, N, t)).is_one());
    }
}

TEST(ApplyGl, ExamplesAndInvariance) {
    auto F5 = prime_field(5);
    Matrix a = Matrix::projection(F5, 2, 4);
    Matrix v(F5, 2, 1);
    v.at(0, 0) = fe(F5, 3);

    auto [a1, v1] = apply_gl(Matrix::identity(F5, 2), a, v);
    EXPECT_EQ(a1, a);
    EXPECT_EQ(v1, v);

    Matrix d = from_rows(F5, {{2, 0}, {0, 1}});
    auto [a2, v2] = apply_gl(d, a, v);
    EXPECT_EQ(a2.at(0, 0), fe(F5, 2));
    EXPECT_EQ(a2.rank(), 2);
    // the reduction target is invariant under the GL action
    Matrix m = a2;
    for (const auto& t : reduce_to_projection(a2)) apply_transvection(m, t);
    EXPECT_EQ(m, Matrix::projection(F5, 2, 4));

    // zero section stays zero
    Matrix z(F5, 2, 1);
    EXPECT_EQ(apply_gl(d, a, z).second, z);

    EXPECT_THROW(apply_gl(from_rows(F5, {{1, 2}, {2, 4}}), a, v), DomainError);
}

TEST(Stabilize, ExamplesAndCommutation) {
    auto F5 = prime_field(5);
    // stabilize_N([1,0]) = [1,0,0]
    EXPECT_EQ(stabilize_N(Matrix::projection(F5, 1, 2)), Matrix::projection(F5, 1, 3));

    Rng rng(89);
    for (int c = 0; c < 200; ++c) {
        int n = 1 + static_cast<int>(rng.below(3));
        int C = n + 1 + static_cast<int>(rng.below(3));
        Matrix a(F5, n, C);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < C; ++j) a.at(i, j) = random_element(rng, F5);
        Matrix v(F5, n, 1);
        for (int i = 0; i < n; ++i) v.at(i, 0) = random_element(rng, F5);

        auto [an, vn] = stabilize_n(a, v);
        auto [bn, wn] = stabilize_n(stabilize_N(a), v);
        EXPECT_EQ(stabilize_N(an), bn);
        EXPECT_EQ(vn, wn);

        // reduction of the stabilized matrix reaches the projection whenever
        // the original does
        if (a.rank() == n) {
            Matrix m = an;
            for (const auto& t : reduce_to_projection(an)) apply_transvection(m, t);
            EXPECT_EQ(m, Matrix::projection(F5, n + 1, C + 1));
        }
    }
}

TEST(Shuffle, SwapsMiddleBlocks) {
    auto F5 = prime_field(5);
    Matrix t = external_shuffle(F5, 1, 1, 1, 1);
    // acting on coordinates, T maps the new order (n, n', N, N') to the old
    // (n, N, n', N'): coordinates 2 and 3 of the domain are swapped
    Matrix e(F5, 4, 1);
    e.at(1, 0) = fe(F5, 1);
    Matrix te = t * e;
    EXPECT_EQ(te.at(2, 0), fe(F5, 1));
    EXPECT_EQ(te.at(1, 0), fe(F5, 0));
    // permutation matrix: one 1 per row and column
    for (int i = 0; i < 4; ++i) {
        int row_ones = 0, col_ones = 0;
        for (int j = 0; j < 4; ++j) {
            if (!t.at(i, j).is_zero()) ++row_ones;
            if (!t.at(j, i).is_zero()) ++col_ones;
        }
        EXPECT_EQ(row_ones, 1);
        EXPECT_EQ(col_ones, 1);
    }
}

TEST(ExternalProduct, ProjectionsAndCoherence) {
    auto F3 = prime_field(3);
    // proj x proj = proj
    for (int n = 1; n <= 2; ++n)
        for (int N = 1; N <= 2; ++N)
            for (int np = 1; np <= 2; ++np)
                for (int Np = 1; Np <= 2; ++Np)
                    EXPECT_EQ(external_product(Matrix::projection(F3, n, n + N),
                                               Matrix::projection(F3, np, np + Np)),
                              Matrix::projection(F3, n + np, n + np + N + Np));

    // coherence: T_(n+n',N+N',n'',N'') (T_(n,N,n',N') + I) =
    //            (I + T_(n',N',n'',N'')) T_(n,N,n'+n'',N'+N'')
    Rng rng(97);
    for (int c = 0; c < 100; ++c) {
        int d[6];
        for (int& x : d) x = 1 + static_cast<int>(rng.below(3));
        Matrix t1 = external_shuffle(F3, d[0], d[1], d[2], d[3]);
        Matrix t2 = external_shuffle(F3, d[0] + d[2], d[1] + d[3], d[4], d[5]);
        Matrix t3 = external_shuffle(F3, d[2], d[3], d[4], d[5]);
        Matrix t4 = external_shuffle(F3, d[0], d[1], d[2] + d[4], d[3] + d[5]);
        EXPECT_EQ(direct_sum(t1, Matrix::identity(F3, d[4] + d[5])) * t2,
                  direct_sum(Matrix::identity(F3, d[0] + d[1]), t3) * t4);
    }

    // and therefore the external product is associative
    for (int c = 0; c < 50; ++c) {
        auto rand_level = [&](int n, int N) {
            Matrix a(F3, n, n + N);
            do {
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n + N; ++j) a.at(i, j) = random_element(rng, F3);
            } while (a.rank() != n);
            return a;
        };
        Matrix a = rand_level(1 + static_cast<int>(rng.below(2)), 1 + static_cast<int>(rng.below(2)));
        Matrix b = rand_level(1 + static_cast<int>(rng.below(2)), 1 + static_cast<int>(rng.below(2)));
        Matrix cmat = rand_level(1 + static_cast<int>(rng.below(2)), 1 + static_cast<int>(rng.below(2)));
        EXPECT_EQ(external_product(external_product(a, b), cmat),
                  external_product(a, external_product(b, cmat)));
    }
}
