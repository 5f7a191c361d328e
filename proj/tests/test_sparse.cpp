#include "dgbar/sparse.hpp"

#include <doctest.h>

#include <random>

using namespace dgbar;

namespace {

SparseMatrix from_rows(std::vector<std::vector<long>> rows, int cols) {
    SparseMatrix m(static_cast<int>(rows.size()), cols);
    for (int r = 0; r < static_cast<int>(rows.size()); ++r)
        for (int c = 0; c < cols; ++c)
            if (rows[r][c] != 0)
                m.add(r, c, rat(rows[r][c]));
    return m;
}

SparseMatrix random_sparse(std::mt19937_64& rng, int rows, int cols, double density) {
    SparseMatrix m(rows, cols);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<long> num(-4, 4);
    std::uniform_int_distribution<long> den(1, 3);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            if (coin(rng) < density) {
                long n = num(rng);
                if (n != 0)
                    m.set(r, c, rat(n, den(rng)));
            }
    return m;
}

} // namespace

TEST_CASE("rat basics") {
    CHECK(rat_str(rat(6, -4)) == "-3/2");
    CHECK(rat_str(rat(0, 7)) == "0");
    CHECK(rat_str(rat(5)) == "5");
    CHECK(rat_parse("-3/6") == rat(-1, 2));
    CHECK(rat_parse("7") == rat(7));
    CHECK_THROWS(rat_parse("1/0"));
    CHECK_THROWS(rat_parse(""));
}

TEST_CASE("rank: empty, identity, dependent rows") {
    CHECK(rank(SparseMatrix(0, 0)) == 0);
    CHECK(rank(SparseMatrix::identity(3)) == 3);
    // [[1,2],[2,4]] has rank 1 (hand elimination)
    CHECK(rank(from_rows({{1, 2}, {2, 4}}, 2)) == 1);
}

TEST_CASE("kernel_basis: trivial and forced cases") {
    CHECK(kernel_basis(SparseMatrix::identity(2)).empty());
    CHECK(kernel_basis(SparseMatrix(2, 3)).size() == 3);
    // [[1,1,0],[0,0,1]] -> one vector proportional to (1,-1,0)
    auto k = kernel_basis(from_rows({{1, 1, 0}, {0, 0, 1}}, 3));
    REQUIRE(k.size() == 1);
    SparseVec expect = sv_normalize({{0, rat(-1)}, {1, rat(1)}});
    // normalize sign: RREF kernel vector has 1 at the free column (index 1)
    CHECK(sv_equal(k[0], expect));
}

TEST_CASE("cokernel_quotient: zero, identity, single column") {
    CokernelQuotient z(SparseMatrix(2, 2));
    CHECK(z.dim() == 2);
    CokernelQuotient id(SparseMatrix::identity(3));
    CHECK(id.dim() == 0);

    SparseMatrix col(2, 1);
    col.set(0, 0, rat(2));
    col.set(1, 0, rat(4));
    CokernelQuotient q(col);
    CHECK(q.dim() == 1);
    CHECK(q.reduce(col.column(0)).empty());
    // any row-space vector reduces consistently
    SparseVec v{{0, rat(1)}, {1, rat(2)}};
    CHECK(q.reduce(v).empty());
    SparseVec w{{0, rat(1)}};
    CHECK_FALSE(q.reduce(w).empty());
}

TEST_CASE("rank equals rank of transpose on random sparse matrices") {
    std::mt19937_64 rng(12345);
    for (int trial = 0; trial < 30; ++trial) {
        SparseMatrix m = random_sparse(rng, 1 + trial % 9, 1 + (trial * 7) % 11, 0.35);
        CHECK(rank(m) == rank(m.transpose()));
    }
}

TEST_CASE("cols = rank + kernel dimension; kernel vectors annihilated exactly") {
    std::mt19937_64 rng(999);
    for (int trial = 0; trial < 30; ++trial) {
        SparseMatrix m = random_sparse(rng, 2 + trial % 7, 2 + (trial * 5) % 9, 0.4);
        auto k = kernel_basis(m);
        CHECK(m.cols() == rank(m) + static_cast<int>(k.size()));
        for (const auto& v : k)
            CHECK(m.apply(v).empty());
    }
}

TEST_CASE("pivot strategies agree on rank and reductions") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 25; ++trial) {
        SparseMatrix m = random_sparse(rng, 3 + trial % 8, 3 + (trial * 3) % 8, 0.45);
        CHECK(rank(m, PivotRule::Markowitz) == rank(m, PivotRule::FirstFit));
        Rref a = rref(m, PivotRule::Markowitz);
        Rref b = rref(m, PivotRule::FirstFit);
        CHECK(a.pivot_cols == b.pivot_cols);
        for (int i = 0; i < a.rank; ++i)
            CHECK(sv_equal(a.rows[i], b.rows[i])); // RREF is canonical
        // reductions of random vectors agree
        CokernelQuotient qa(m, PivotRule::Markowitz);
        CokernelQuotient qb(m, PivotRule::FirstFit);
        SparseMatrix v = random_sparse(rng, m.rows(), 1, 0.8);
        CHECK(sv_equal(qa.reduce(v.column(0)), qb.reduce(v.column(0))));
    }
}

TEST_CASE("sparse path (above the dense cutoff): kernels, ranks, canonical RREF") {
    std::mt19937_64 rng(6174);
    for (int trial = 0; trial < 6; ++trial) {
        SparseMatrix m = random_sparse(rng, kDenseCutoff + 6 + trial, kDenseCutoff + 16, 0.12);
        CHECK(rank(m) == rank(m.transpose()));
        auto k = kernel_basis(m);
        CHECK(m.cols() == rank(m) + static_cast<int>(k.size()));
        for (const auto& v : k)
            CHECK(m.apply(v).empty());
        // both pivot rules give the canonical reduced form
        Rref a = rref(m, PivotRule::Markowitz);
        Rref b = rref(m, PivotRule::FirstFit);
        REQUIRE(a.pivot_cols == b.pivot_cols);
        for (int i = 0; i < a.rank; ++i)
            CHECK(sv_equal(a.rows[i], b.rows[i]));
        // pivot columns carry the identity pattern across rows
        for (int i = 0; i < a.rank; ++i)
            for (int j = 0; j < a.rank; ++j) {
                const Rat* e = sv_at(a.rows[i], a.pivot_cols[j]);
                if (i == j) {
                    REQUIRE(e != nullptr);
                    CHECK(*e == 1);
                } else {
                    CHECK(e == nullptr);
                }
            }
        CokernelQuotient q(m);
        CHECK(q.dim() == m.rows() - rank(m));
        for (int col = 0; col < m.cols(); ++col)
            CHECK(q.reduce(m.column(col)).empty());
    }
}

TEST_CASE("sparse and dense elimination paths agree") {
    std::mt19937_64 rng(777);
    for (int trial = 0; trial < 10; ++trial) {
        // Straddle the dense cutoff by pasting the same block into a matrix
        // wide enough to force the sparse path.
        SparseMatrix small = random_sparse(rng, 20, 20, 0.3);
        SparseMatrix wide(kDenseCutoff + 20, kDenseCutoff + 20);
        for (int r = 0; r < 20; ++r)
            for (const auto& [c, val] : small.row(r))
                wide.set(r, c, val);
        CHECK(rank(small) == rank(wide));
    }
}

TEST_CASE("EchelonBasis membership and QuotientReducer coordinates") {
    EchelonBasis e;
    CHECK(e.insert(SparseVec{{0, rat(1)}, {2, rat(2)}}));
    CHECK(e.insert(SparseVec{{1, rat(3)}}));
    CHECK_FALSE(e.insert(SparseVec{{0, rat(2)}, {1, rat(3)}, {2, rat(4)}}));
    CHECK(e.rank() == 2);

    QuotientReducer q;
    q.add_boundary(SparseVec{{0, rat(1)}, {1, rat(1)}});
    auto r0 = q.add_candidate(SparseVec{{0, rat(1)}});
    REQUIRE(r0.has_value());
    CHECK(q.classes() == 1);
    // canonical representative of the single class is e1 (e0 = -e1 mod boundary)
    CHECK(sv_equal(q.representatives()[0], SparseVec{{1, rat(1)}}));
    auto coords = q.coordinates(SparseVec{{1, rat(1)}});
    REQUIRE(coords.has_value());
    CHECK(sv_equal(*coords, SparseVec{{0, rat(1)}}));
    auto coords0 = q.coordinates(SparseVec{{0, rat(1)}});
    REQUIRE(coords0.has_value());
    CHECK(sv_equal(*coords0, SparseVec{{0, rat(-1)}}));
    // vector outside span(boundary, reps)
    CHECK_FALSE(q.coordinates(SparseVec{{2, rat(1)}}).has_value());
}

TEST_CASE("matrix compose and apply") {
    SparseMatrix a = from_rows({{1, 2}, {0, 1}}, 2);
    SparseMatrix b = from_rows({{1, 0}, {3, 1}}, 2);
    SparseMatrix ab = a.compose(b);
    CHECK(ab.get(0, 0) == rat(7));
    CHECK(ab.get(0, 1) == rat(2));
    CHECK(ab.get(1, 0) == rat(3));
    CHECK(ab.get(1, 1) == rat(1));
    SparseVec x{{0, rat(1)}, {1, rat(-1)}};
    CHECK(sv_equal(a.apply(x), sv_normalize({{0, rat(-1)}, {1, rat(-1)}})));
}
