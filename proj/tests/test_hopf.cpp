#include "dgbar/hopf.hpp"

#include "dgbar/weighted.hpp"

#include <doctest.h>

using namespace dgbar;

namespace {

AlgebraPtr lambda_e() {
    return std::make_shared<Algebra>(
        Algebra::free_gc("lam", {Generator{"e", 1, 1}}, {}, {}, true));
}

AlgebraPtr poly_x() {
    return std::make_shared<Algebra>(
        Algebra::free_gc("kx", {Generator{"x", 0, 1}}, {}, {}, true));
}

AlgebraPtr two_gen_ef() {
    std::vector<Algebra::SCElem> basis{{"one", 0, 0}, {"e", 1, 1}, {"f", 1, 2}};
    std::map<std::pair<int, int>, SparseVec> mul;
    mul[{1, 1}] = SparseVec{};
    mul[{1, 2}] = SparseVec{};
    mul[{2, 1}] = SparseVec{};
    mul[{2, 2}] = SparseVec{};
    return std::make_shared<Algebra>(Algebra::struct_const(
        "ef", basis, 0, mul, {}, {Rat(1), Rat(0), Rat(0)}, true));
}

AlgebraPtr rational_target() {
    std::vector<Algebra::SCElem> basis{{"one", 0, 0}};
    return std::make_shared<Algebra>(
        Algebra::struct_const("Q", basis, 0, {}, {}, {Rat(1)}, false));
}

std::vector<std::vector<int>> z2_table() { return {{0, 1}, {1, 0}}; }

std::vector<std::vector<int>> s3_table() {
    // permutations of {0,1,2} listed as: id, (01), (02), (12), (012), (021)
    // composition g*h = apply h first, then g
    auto perm = [](int idx) -> std::array<int, 3> {
        switch (idx) {
        case 0: return {0, 1, 2};
        case 1: return {1, 0, 2};
        case 2: return {2, 1, 0};
        case 3: return {0, 2, 1};
        case 4: return {1, 2, 0};
        default: return {2, 0, 1};
        }
    };
    auto index_of = [&](const std::array<int, 3>& p) {
        for (int i = 0; i < 6; ++i)
            if (perm(i) == p)
                return i;
        return -1;
    };
    std::vector<std::vector<int>> t(6, std::vector<int>(6));
    for (int g = 0; g < 6; ++g)
        for (int h = 0; h < 6; ++h) {
            auto pg = perm(g), ph = perm(h);
            std::array<int, 3> comp{};
            for (int k = 0; k < 3; ++k)
                comp[k] = pg[ph[k]];
            t[g][h] = index_of(comp);
        }
    return t;
}

} // namespace

TEST_CASE("coarse moduli of the unit algebra is the trivial Hopf algebra") {
    MixedTateInput unit{std::make_shared<Algebra>(Algebra::free_gc("u", {}, {}, {}, true)), ""};
    BarComplex b = equivariant_bar(unit, 3);
    HopfAlgebra h = coarse_moduli(b, 3);
    CHECK(h.dim() == 1);
    CHECK_FALSE(h.truncated);
    CHECK(hopf_validate(h).ok);
}

TEST_CASE("coarse moduli of Lambda(e): polynomial Hopf algebra on one primitive") {
    MixedTateInput lam{lambda_e(), ""};
    BarComplex b = equivariant_bar(lam, 4);
    HopfAlgebra h = coarse_moduli(b, 4);
    REQUIRE(h.dim() == 5); // one class per weight 0..4
    CHECK(h.truncated);
    HopfReport rep = hopf_validate(h);
    for (const auto& s : rep.violations)
        MESSAGE(s);
    CHECK(rep.ok);

    // basis b_w = [e|...|e] class; in the divided-power normalization the
    // structure constants of the polynomial Hopf algebra on one primitive u
    // are b_i b_j = C(i+j, i) b_{i+j}, Delta b_n = sum b_i (x) b_{n-i},
    // S b_n = (-1)^n b_n, with u = b_1 primitive.
    auto idx = [&](int w) {
        for (int i = 0; i < h.dim(); ++i)
            if (h.basis[i].weight == w)
                return i;
        return -1;
    };
    auto binom = [](int n, int k) {
        long b = 1;
        for (int i = 0; i < k; ++i)
            b = b * (n - i) / (i + 1);
        return Rat(b);
    };
    for (int i = 0; i <= 4; ++i)
        for (int j = 0; i + j <= 4; ++j) {
            const SparseVec& p = h.product(idx(i), idx(j));
            REQUIRE(p.size() == (i + j == 0 ? 1 : 1));
            CHECK(p[0].first == idx(i + j));
            CHECK(p[0].second == binom(i + j, i));
        }
    for (int n = 0; n <= 4; ++n) {
        const auto& com = h.comul.at(idx(n));
        CHECK(static_cast<int>(com.size()) == n + 1);
        for (const auto& [a, b2, c] : com) {
            CHECK(h.basis[a].weight + h.basis[b2].weight == n);
            CHECK(c == Rat(1));
        }
        const SparseVec& s = h.antipode.at(idx(n));
        REQUIRE(s.size() == 1);
        CHECK(s[0].first == idx(n));
        CHECK(s[0].second == (n % 2 == 0 ? Rat(1) : Rat(-1)));
    }
    // u = b_1 is primitive: Delta u = u (x) 1 + 1 (x) u
    {
        const auto& com = h.comul.at(idx(1));
        REQUIRE(com.size() == 2);
        for (const auto& [a, b2, c] : com)
            CHECK(((a == h.unit && b2 == idx(1)) || (a == idx(1) && b2 == h.unit)));
    }
}

TEST_CASE("coarse moduli of k[x]: trivial group at H^0") {
    // connectivity fails for this input, but coarse_moduli itself is defined;
    // H^0 is Q only (the higher classes sit in negative degrees).
    BarOptions opt;
    opt.weight_bound = 4;
    BarComplex b = bar_complex(poly_x(), opt);
    HopfAlgebra h = coarse_moduli(b, 4);
    CHECK(h.dim() == 1);
    CHECK(hopf_validate(h).ok);
}

TEST_CASE("coarse moduli of the two-generator input passes hopf_validate") {
    MixedTateInput ef{two_gen_ef(), ""};
    BarComplex b = equivariant_bar(ef, 4);
    HopfAlgebra h = coarse_moduli(b, 4);
    // dims 1,1,2,3,5 per weight
    std::map<int, int> per_weight;
    for (const auto& e : h.basis)
        per_weight[e.weight]++;
    CHECK(per_weight[0] == 1);
    CHECK(per_weight[1] == 1);
    CHECK(per_weight[2] == 2);
    CHECK(per_weight[3] == 3);
    CHECK(per_weight[4] == 5);
    HopfReport rep = hopf_validate(h);
    for (const auto& s : rep.violations)
        MESSAGE(s);
    CHECK(rep.ok);
}

TEST_CASE("coarse moduli with a genuine differential: dg = ef") {
    // Lambda(e, f, g) with |e|=|f|=|g|=1, weights 1, 2, 3, d g = e*f.
    // Connective; H^0 of the bar mixes letters through the differential
    // (the weight-3 classes include [g] + [e|f]). Expected H^0 dimensions
    // 1,1,2,3,4 at weights 0..4, found by hand elimination of the degree-0
    // bar bidegrees (the relation dg = ef kills one weight-3 word compared
    // with the free case and one weight-4 word).
    auto a = std::make_shared<Algebra>(Algebra::free_gc(
        "heis",
        {Generator{"e", 1, 1}, Generator{"f", 1, 2}, Generator{"g", 1, 3}},
        {{"g", FreeElem{{Monomial{{{0, 1}, {1, 1}}}, Rat(1)}}}}, {}, true));
    REQUIRE(a->validate().ok);
    MixedTateInput q{a, ""};
    REQUIRE(connectivity_check(q, 4).pass);
    BarComplex b = equivariant_bar(q, 4);
    for (int w : b.weights())
        REQUIRE(check_complex(b.piece(w)).ok);
    std::map<int, int> h0;
    for (const auto& r : b.cohomology_table())
        if (r.degree == 0)
            h0[r.weight] = r.dim;
    CHECK(h0[0] == 1);
    CHECK(h0[1] == 1);
    CHECK(h0[2] == 2);
    CHECK(h0[3] == 3);
    CHECK(h0[4] == 4);

    HopfAlgebra h = coarse_moduli(b, 4);
    HopfReport rep = hopf_validate(h);
    for (const auto& s : rep.violations)
        MESSAGE(s);
    CHECK(rep.ok);
    // the weight-1 class is primitive and group-like behaviour is ruled by
    // the bialgebra identities already validated; spot-check the square of
    // the weight-1 class lands in weight 2 with the divided-power factor
    int b1 = -1;
    for (int i = 0; i < h.dim(); ++i)
        if (h.basis[i].weight == 1)
            b1 = i;
    REQUIRE(b1 >= 0);
    const SparseVec& sq = h.product(b1, b1);
    CHECK_FALSE(sq.empty());
    for (const auto& [k, c] : sq)
        CHECK(h.basis[k].weight == 2);
}

TEST_CASE("hopf_validate flags fabricated non-coassociative input") {
    HopfAlgebra h = finite_group_hopf(z2_table());
    REQUIRE(hopf_validate(h).ok);
    // corrupt the coproduct of the last basis element
    h.comul[1] = {{1, 1, Rat(1)}};
    HopfReport rep = hopf_validate(h);
    CHECK_FALSE(rep.ok);
    bool mentions = false;
    for (const auto& s : rep.violations)
        if (s.find("coassociativity") != std::string::npos ||
            s.find("counit") != std::string::npos)
            mentions = true;
    CHECK(mentions);
}

TEST_CASE("finite_group_hopf: trivial group, Z/2 group-likes, S3") {
    HopfAlgebra triv = finite_group_hopf({{0}});
    CHECK(triv.dim() == 1);
    CHECK(hopf_validate(triv).ok);

    HopfAlgebra z2 = finite_group_hopf(z2_table());
    CHECK(z2.dim() == 2);
    CHECK(hopf_validate(z2).ok);
    // group-like elements: the unit, and the character e0 - e1 = one - 2 e1
    // (in the basis {one, e1}); check Delta g = g (x) g for g = one - 2 e1.
    {
        // Delta(one) = one (x) one
        std::map<std::pair<int, int>, Rat> dg;
        auto add_delta = [&](int i, const Rat& c) {
            for (const auto& [a, b, v] : z2.comul.at(i))
                dg[{a, b}] += c * v;
        };
        add_delta(0, Rat(1));
        add_delta(1, Rat(-2));
        // g (x) g with g = one - 2 e1
        std::map<std::pair<int, int>, Rat> gg;
        std::vector<std::pair<int, Rat>> g{{0, Rat(1)}, {1, Rat(-2)}};
        for (const auto& [a, ca] : g)
            for (const auto& [b, cb] : g)
                gg[{a, b}] += ca * cb;
        for (auto* m : {&dg, &gg})
            for (auto it = m->begin(); it != m->end();)
                it = is_zero(it->second) ? m->erase(it) : std::next(it);
        CHECK(dg == gg);
    }

    HopfAlgebra s3 = finite_group_hopf(s3_table());
    CHECK(s3.dim() == 6);
    HopfReport rep = hopf_validate(s3);
    for (const auto& s : rep.violations)
        MESSAGE(s);
    CHECK(rep.ok);
}

TEST_CASE("finite_group_hopf rejects non-groups with witnesses") {
    CHECK_THROWS_WITH_AS(finite_group_hopf({{0, 0}, {0, 0}}),
                         doctest::Contains("identity"), MathError);
    // associativity failure: a "random" Latin-like square that is not a group
    std::vector<std::vector<int>> bad{{0, 1, 2}, {1, 2, 0}, {2, 1, 0}};
    CHECK_THROWS_AS(finite_group_hopf(bad), MathError);
}

TEST_CASE("group_points: finite group Hopf over Q recovers the group") {
    for (const auto& table : {z2_table(), s3_table()}) {
        HopfAlgebra h = finite_group_hopf(table);
        GroupPoints pts = group_points(h, rational_target());
        REQUIRE_FALSE(pts.refused);
        const int n = static_cast<int>(table.size());
        REQUIRE(static_cast<int>(pts.points.size()) == n);
        // identify each point with the group element where its indicator is 1:
        // evaluation at g sends e_k to [k == g] and "one" to 1; verify the law
        // matches the table under that bijection.
        auto group_elem = [&](int p) {
            // e_g(point) = 1 for exactly one g; points are evaluations
            // basis: index 0 = one; index i>0 = e_{nonid[i-1]}
            // identity of the group: all e_g (g != id) evaluate to 0
            std::vector<int> nonid;
            int e = -1;
            for (int cand = 0; cand < n; ++cand) {
                bool ok = true;
                for (int g = 0; g < n; ++g)
                    if (table[cand][g] != g || table[g][cand] != g)
                        ok = false;
                if (ok)
                    e = cand;
            }
            for (int g = 0; g < n; ++g)
                if (g != e)
                    nonid.push_back(g);
            for (size_t i = 0; i < nonid.size(); ++i)
                if (pts.points[p][1 + i] == 1)
                    return nonid[i];
            return e;
        };
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q)
                CHECK(group_elem(pts.law[p][q]) == table[group_elem(p)][group_elem(q)]);
    }
}

TEST_CASE("group_points: truncated polynomial Hopf refused with dimension 1") {
    MixedTateInput lam{lambda_e(), ""};
    BarComplex b = equivariant_bar(lam, 3);
    HopfAlgebra h = coarse_moduli(b, 3);
    REQUIRE(h.truncated);
    CHECK(primitive_dimension(h) == 1);
    GroupPoints pts = group_points(h, rational_target());
    CHECK(pts.refused);
    CHECK(pts.variety_dimension == 1);
}

TEST_CASE("group_points: trivial Hopf algebra has a single point") {
    MixedTateInput unit{std::make_shared<Algebra>(Algebra::free_gc("u", {}, {}, {}, true)), ""};
    HopfAlgebra h = coarse_moduli(equivariant_bar(unit, 2), 2);
    GroupPoints pts = group_points(h, rational_target());
    REQUIRE_FALSE(pts.refused);
    REQUIRE(pts.points.size() == 1);
    CHECK(pts.identity == 0);
    CHECK(pts.law[0][0] == 0);
}
