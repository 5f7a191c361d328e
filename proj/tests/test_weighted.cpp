#include "dgbar/weighted.hpp"

#include <doctest.h>

#include <random>

using namespace dgbar;

namespace {

AlgebraPtr poly_x() {
    return std::make_shared<Algebra>(
        Algebra::free_gc("kx", {Generator{"x", 0, 1}}, {}, {}, true));
}

AlgebraPtr lambda_e() {
    return std::make_shared<Algebra>(
        Algebra::free_gc("lam", {Generator{"e", 1, 1}}, {}, {}, true));
}

AlgebraPtr two_gen_ef() {
    // Q-bar = Q e (+) Q f with trivial products, |e| = |f| = 1, weights 1, 2
    std::vector<Algebra::SCElem> basis{{"one", 0, 0}, {"e", 1, 1}, {"f", 1, 2}};
    std::map<std::pair<int, int>, SparseVec> mul;
    mul[{1, 1}] = SparseVec{};
    mul[{1, 2}] = SparseVec{};
    mul[{2, 1}] = SparseVec{};
    mul[{2, 2}] = SparseVec{};
    return std::make_shared<Algebra>(Algebra::struct_const(
        "ef", basis, 0, mul, {}, {Rat(1), Rat(0), Rat(0)}, true));
}

GradedComplex one_class(int weight, int degree) {
    GradedComplex g;
    Complex c(degree, degree);
    c.set_basis(degree, {BasisLabel{BasisLabel::Gen, {0}}});
    g.pieces.emplace(weight, std::move(c));
    return g;
}

// Independent count for the two-generator example: words in letters of
// weights 1 and 2, all in degree 0 with zero differential, so dim H^0 at
// weight w is the number of compositions of w into parts 1 and 2.
long compositions_1_2(int w) {
    if (w < 0)
        return 0;
    std::vector<long> f(std::max(w + 1, 2), 0);
    f[0] = 1;
    f[1] = 1;
    for (int k = 2; k <= w; ++k)
        f[k] = f[k - 1] + f[k - 2];
    return f[w];
}

} // namespace

TEST_CASE("graded_tensor: unit, convolution dimensions, associativity") {
    GradedComplex u = GradedComplex::unit();
    GradedComplex a = one_class(1, 0);
    GradedComplex b = one_class(2, 1);

    GradedComplex ua = graded_tensor(u, a);
    CHECK(ua.dim(1, 0) == 1);
    CHECK(graded_table(ua) == graded_table(a));

    GradedComplex ab = graded_tensor(a, b);
    CHECK(ab.dim(3, 1) == 1);

    std::mt19937_64 rng(11);
    // associativity of dimension tables on random graded complexes
    auto random_graded = [&](int maxw) {
        GradedComplex g;
        std::uniform_int_distribution<int> dim_d(0, 2);
        for (int w = 0; w <= maxw; ++w) {
            int d0 = dim_d(rng), d1 = dim_d(rng);
            if (d0 == 0 && d1 == 0)
                continue;
            Complex c(0, 1);
            std::vector<BasisLabel> b0, b1;
            for (int i = 0; i < d0; ++i)
                b0.push_back(BasisLabel{BasisLabel::Gen, {i}});
            for (int i = 0; i < d1; ++i)
                b1.push_back(BasisLabel{BasisLabel::Gen, {i}});
            c.set_basis(0, b0);
            c.set_basis(1, b1);
            g.pieces.emplace(w, std::move(c));
        }
        return g;
    };
    for (int trial = 0; trial < 4; ++trial) {
        GradedComplex x = random_graded(2), y = random_graded(2), z = random_graded(2);
        Table l = graded_table(graded_tensor(graded_tensor(x, y), z));
        Table r = graded_table(graded_tensor(x, graded_tensor(y, z)));
        CHECK(l == r);
    }
}

TEST_CASE("connectivity_check: unit, positive example, negative-degree witness") {
    MixedTateInput unit{std::make_shared<Algebra>(Algebra::free_gc("u", {}, {}, {}, true)), ""};
    CHECK(connectivity_check(unit, 3).pass);

    MixedTateInput lam{lambda_e(), ""};
    CHECK(connectivity_check(lam, 4).pass);

    // a degree -1 generator fails with a witness
    auto bad = std::make_shared<Algebra>(
        Algebra::free_gc("neg", {Generator{"t", -1, 1}}, {}, {}, true));
    ConnectivityReport rep = connectivity_check({bad, ""}, 3);
    CHECK_FALSE(rep.pass);
    REQUIRE_FALSE(rep.witnesses.empty());
    CHECK(rep.witnesses[0].find("H^-1") != std::string::npos);

    // k[x] with |x| = 0, w = 1: H^0 at weight 1 is nonzero -> FAIL
    ConnectivityReport repx = connectivity_check({poly_x(), ""}, 3);
    CHECK_FALSE(repx.pass);
}

TEST_CASE("equivariant bar: unit input gives the trivial group model") {
    MixedTateInput unit{std::make_shared<Algebra>(Algebra::free_gc("u", {}, {}, {}, true)), ""};
    BarComplex b = equivariant_bar(unit, 4);
    Table t = b.cohomology_table();
    REQUIRE(t.size() == 1);
    CHECK(t[0].weight == 0);
    CHECK(t[0].degree == 0);
    CHECK(t[0].dim == 1);
}

TEST_CASE("equivariant bar: one generator e, H^0 = one class per weight") {
    MixedTateInput lam{lambda_e(), ""};
    BarComplex b = equivariant_bar(lam, 6);
    Table t = b.cohomology_table();
    REQUIRE(static_cast<int>(t.size()) == 7);
    for (int w = 0; w <= 6; ++w) {
        CHECK(t[w].weight == w);
        CHECK(t[w].degree == 0);
        CHECK(t[w].dim == 1);
    }
    // weight-w piece is spanned by the single word [e|...|e]
    for (int w = 1; w <= 6; ++w)
        CHECK(b.words(w, 0).size() == 1);
    // [e].[e] = 2 [e|e]
    WordSum sq = shuffle_product(b.letters(), BarWord{{0}}, BarWord{{0}});
    REQUIRE(sq.size() == 1);
    CHECK(sq.begin()->second == Rat(2));
}

TEST_CASE("equivariant bar: two generators, H^0 dims are the composition counts") {
    MixedTateInput ef{two_gen_ef(), ""};
    BarComplex b = equivariant_bar(ef, 4);
    Table t = b.cohomology_table();
    std::map<int, int> h0;
    for (const auto& r : t) {
        CHECK(r.degree == 0); // everything in degree 0 for this input
        h0[r.weight] = r.dim;
    }
    for (int w = 0; w <= 4; ++w)
        CHECK(h0[w] == compositions_1_2(w));
    // frozen golden values at weights 0..3 (independent composition count)
    CHECK(h0[0] == 1);
    CHECK(h0[1] == 1);
    CHECK(h0[2] == 2);
    CHECK(h0[3] == 3);
}

TEST_CASE("equivariant bar invariants: weight-0 class unique, word length <= weight") {
    MixedTateInput ef{two_gen_ef(), ""};
    BarComplex b = equivariant_bar(ef, 4);
    CHECK(b.words(0, 0).size() == 1);
    CHECK(b.words(0, 0)[0].empty());
    for (int w = 1; w <= 4; ++w)
        for (int n = b.piece(w).lo(); n <= b.piece(w).hi(); ++n)
            for (const BarWord& word : b.words(w, n))
                CHECK(word.length() <= w);
    // positivity violation refused
    auto bad = std::make_shared<Algebra>(
        Algebra::free_gc("w0", {Generator{"x", 0, 0}}, {}, {}, true));
    CHECK_THROWS_AS(equivariant_bar({bad, ""}, 3), MathError);
}

TEST_CASE("periodify: Laurent model for k[x]") {
    FreeElem kappa{{Monomial{{{0, 1}}}, Rat(1)}};
    PeriodicAlgebra p = periodify(poly_x(), AlgElement{kappa}, {-2, 3}, {0, 0}, 8);
    for (int w = -2; w <= 3; ++w) {
        const PeriodicPiece* piece = p.piece(w, 0);
        REQUIRE(piece != nullptr);
        CHECK(piece->dim == 1);
    }
    // off-degree pieces stabilize to zero
    PeriodicAlgebra q = periodify(poly_x(), AlgElement{kappa}, {0, 1}, {1, 2}, 8);
    for (const auto& piece : q.pieces)
        CHECK(piece.dim == 0);
}

TEST_CASE("periodify preconditions: unit kappa, nilpotent kappa") {
    FreeElem unit_kappa{{Monomial{}, Rat(1)}};
    CHECK_THROWS_WITH_AS(periodify(poly_x(), AlgElement{unit_kappa}, {0, 0}, {0, 0}, 8),
                         doctest::Contains("positive weight"), MathError);

    // dual numbers with weight 1 on x: kappa = x, kappa^2 = 0
    std::vector<Algebra::SCElem> basis{{"one", 0, 0}, {"x", 0, 1}};
    std::map<std::pair<int, int>, SparseVec> mul;
    mul[{1, 1}] = SparseVec{};
    auto dual = std::make_shared<Algebra>(
        Algebra::struct_const("dual", basis, 0, mul, {}, {Rat(1), Rat(0)}, false));
    SparseVec kx{{1, Rat(1)}};
    CHECK_THROWS_WITH_AS(periodify(dual, AlgElement{kx}, {0, 0}, {0, 0}, 8),
                         doctest::Contains("non-stabilizing"), MathError);
}

TEST_CASE("periodify: kappa multiplication is an isomorphism on stabilized pieces") {
    FreeElem kappa{{Monomial{{{0, 1}}}, Rat(1)}};
    AlgebraPtr kx = poly_x();
    PeriodicAlgebra p = periodify(kx, AlgElement{kappa}, {0, 2}, {0, 0}, 8);
    // consecutive stabilized pieces have equal dimension and the tower maps
    // were verified square and full-rank during stabilization detection
    for (int w = 0; w <= 1; ++w) {
        const PeriodicPiece* a = p.piece(w, 0);
        const PeriodicPiece* b = p.piece(w + 1, 0);
        REQUIRE(a);
        REQUIRE(b);
        CHECK(a->dim == b->dim);
    }
}

TEST_CASE("non-stabilizing tower within bound is an explicit failure") {
    // two polynomial generators of weight 1: dimensions grow forever
    auto kxy = std::make_shared<Algebra>(Algebra::free_gc(
        "kxy", {Generator{"x", 0, 1}, Generator{"y", 0, 1}}, {}, {}, false));
    FreeElem kappa{{Monomial{{{0, 1}}}, Rat(1)}};
    CHECK_THROWS_WITH_AS(periodify(kxy, AlgElement{kappa}, {0, 0}, {0, 0}, 6),
                         doctest::Contains("did not stabilize"), MathError);
}
