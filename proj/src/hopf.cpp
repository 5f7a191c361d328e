#include "dgbar/hopf.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <sstream>

namespace dgbar {

const SparseVec& HopfAlgebra::product(int i, int j) const {
    auto it = mul.find({i, j});
    if (it == mul.end())
        throw std::logic_error("HopfAlgebra::product: pair outside the truncation bound");
    return it->second;
}

SparseVec HopfAlgebra::apply_antipode(const SparseVec& v) const {
    SparseVec out;
    for (const auto& [i, c] : v) {
        auto it = antipode.find(i);
        if (it == antipode.end())
            throw std::logic_error("HopfAlgebra::apply_antipode: missing entry");
        sv_axpy(out, c, it->second);
    }
    return out;
}

// ---------------------------------------------------------------------------
// hopf_validate

namespace {

SparseVec mul_vec(const HopfAlgebra& h, const SparseVec& a, const SparseVec& b) {
    SparseVec out;
    for (const auto& [i, ci] : a)
        for (const auto& [j, cj] : b)
            sv_axpy(out, ci * cj, h.product(i, j));
    return out;
}

bool within_bound(const HopfAlgebra& h, int weight) {
    return !h.truncated || weight <= h.weight_bound;
}

} // namespace

HopfReport hopf_validate(const HopfAlgebra& h) {
    HopfReport rep;
    const int n = h.dim();
    auto fail = [&rep](const std::string& s) {
        rep.ok = false;
        if (rep.violations.size() < 40)
            rep.violations.push_back(s);
    };
    if (h.unit < 0 || h.unit >= n) {
        fail("missing unit");
        return rep;
    }
    if (static_cast<int>(h.counit.size()) != n) {
        fail("counit vector has wrong length");
        return rep;
    }

    auto wt = [&](int i) { return h.basis[i].weight; };
    auto known2 = [&](int i, int j) { return within_bound(h, wt(i) + wt(j)); };

    // unit / counit normalization
    if (wt(h.unit) != 0)
        fail("unit has nonzero weight");
    if (h.counit[h.unit] != 1)
        fail("counit(unit) != 1");

    for (int i = 0; i < n; ++i) {
        // unit laws
        if (known2(h.unit, i)) {
            if (!sv_equal(h.product(h.unit, i), SparseVec{{i, Rat(1)}}))
                fail("unit law fails at " + h.basis[i].label);
            ++rep.identities_checked;
        }
        // weight balance of the coproduct; counit laws
        auto it = h.comul.find(i);
        if (it == h.comul.end()) {
            fail("missing coproduct at " + h.basis[i].label);
            continue;
        }
        SparseVec left, right;
        for (const auto& [a, b, c] : it->second) {
            if (wt(a) + wt(b) != wt(i))
                fail("coproduct of " + h.basis[i].label + " unbalances weight");
            sv_axpy(left, c * h.counit[a], SparseVec{{b, Rat(1)}});
            sv_axpy(right, c * h.counit[b], SparseVec{{a, Rat(1)}});
        }
        if (!sv_equal(left, SparseVec{{i, Rat(1)}}) || !sv_equal(right, SparseVec{{i, Rat(1)}}))
            fail("counit law fails at " + h.basis[i].label);
        ++rep.identities_checked;
    }

    // commutativity + weight balance of products
    for (const auto& [key, v] : h.mul) {
        auto [i, j] = key;
        for (const auto& [k, c] : v)
            if (wt(k) != wt(i) + wt(j))
                fail("product " + h.basis[i].label + "*" + h.basis[j].label +
                     " unbalances weight");
        if (!h.mul_known(j, i) || !sv_equal(h.product(j, i), v))
            fail("commutativity fails at (" + h.basis[i].label + ", " + h.basis[j].label + ")");
        ++rep.identities_checked;
    }

    // associativity where every term stays within bound
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                if (!within_bound(h, wt(i) + wt(j) + wt(k)))
                    continue;
                if (!known2(i, j) || !known2(j, k))
                    continue;
                SparseVec l = mul_vec(h, h.product(i, j), SparseVec{{k, Rat(1)}});
                SparseVec r = mul_vec(h, SparseVec{{i, Rat(1)}}, h.product(j, k));
                if (!sv_equal(l, r))
                    fail("associativity fails at (" + h.basis[i].label + ", " +
                         h.basis[j].label + ", " + h.basis[k].label + ")");
                ++rep.identities_checked;
            }

    // coassociativity (always in bound)
    for (int i = 0; i < n; ++i) {
        std::map<std::tuple<int, int, int>, Rat> l, r;
        for (const auto& [a, b, c] : h.comul.at(i))
            for (const auto& [a1, a2, c2] : h.comul.at(a)) {
                l[{a1, a2, b}] += c * c2;
            }
        for (const auto& [a, b, c] : h.comul.at(i))
            for (const auto& [b1, b2, c2] : h.comul.at(b)) {
                r[{a, b1, b2}] += c * c2;
            }
        for (auto& m : {&l, &r})
            for (auto it = m->begin(); it != m->end();)
                it = is_zero(it->second) ? m->erase(it) : std::next(it);
        if (l != r)
            fail("coassociativity fails at " + h.basis[i].label);
        ++rep.identities_checked;
    }

    // bialgebra compatibility where the product is in bound
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (!known2(i, j))
                continue;
            std::map<std::pair<int, int>, Rat> lhs, rhs;
            for (const auto& [k, ck] : h.product(i, j))
                for (const auto& [a, b, c] : h.comul.at(k))
                    lhs[{a, b}] += ck * c;
            for (const auto& [a1, b1, c1] : h.comul.at(i))
                for (const auto& [a2, b2, c2] : h.comul.at(j)) {
                    // degree-0 classes: no Koszul sign
                    for (const auto& [x, cx] : h.product(a1, a2))
                        for (const auto& [y, cy] : h.product(b1, b2))
                            rhs[{x, y}] += c1 * c2 * cx * cy;
                }
            for (auto* m : {&lhs, &rhs})
                for (auto it = m->begin(); it != m->end();)
                    it = is_zero(it->second) ? m->erase(it) : std::next(it);
            if (lhs != rhs)
                fail("bialgebra compatibility fails at (" + h.basis[i].label + ", " +
                     h.basis[j].label + ")");
            ++rep.identities_checked;
        }

    // antipode convolution: m(S (x) id)Delta = counit * unit
    for (int i = 0; i < n; ++i) {
        if (h.antipode.find(i) == h.antipode.end()) {
            fail("missing antipode at " + h.basis[i].label);
            continue;
        }
        SparseVec acc;
        for (const auto& [a, b, c] : h.comul.at(i))
            sv_axpy(acc, c, mul_vec(h, h.apply_antipode(SparseVec{{a, Rat(1)}}),
                                    SparseVec{{b, Rat(1)}}));
        SparseVec expect;
        if (!is_zero(h.counit[i]))
            expect.emplace_back(h.unit, h.counit[i]);
        if (!sv_equal(acc, expect))
            fail("antipode convolution identity fails at " + h.basis[i].label);
        ++rep.identities_checked;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// coarse_moduli

namespace {

// Reduction structure for one weight: boundaries of degree 0 plus chosen
// representatives.
struct H0Piece {
    QuotientReducer reducer;
    int dim = 0;
};

SparseVec words_to_vec(const BarComplex& b, int w, int degree, const WordSum& s,
                       bool* in_basis = nullptr) {
    std::vector<std::pair<int, Rat>> terms;
    if (in_basis)
        *in_basis = true;
    for (const auto& [word, c] : s) {
        int idx = b.word_index(w, degree, word);
        if (idx < 0) {
            if (in_basis) {
                *in_basis = false;
                continue;
            }
            throw MathError("coarse_moduli: word outside the materialized basis");
        }
        terms.emplace_back(idx, c);
    }
    return sv_normalize(std::move(terms));
}

} // namespace

HopfAlgebra coarse_moduli(const BarComplex& b, int weight_bound) {
    HopfAlgebra h;
    h.name = "H0";
    const LetterSystem& ls = b.letters();

    if (!b.weighted()) {
        // Unweighted runs demand a cap-stable H^0.
        if (!b.degree_stable(0))
            throw MathError("coarse_moduli: H^0 is not cap-stable at this wordlength cap; "
                            "refusing (raise the cap or supply weights)");
    }
    h.truncated = false;
    h.weight_bound = weight_bound;

    std::vector<int> weights;
    if (b.weighted()) {
        for (int w = 0; w <= std::min(weight_bound, b.weight_bound()); ++w)
            weights.push_back(w);
        if (weight_bound > b.weight_bound())
            throw std::invalid_argument("coarse_moduli: weight bound exceeds the bar computation");
    } else {
        weights.push_back(0);
    }

    // H^0 per weight with deterministic representatives.
    std::map<int, H0Piece> pieces;
    std::map<std::pair<int, int>, int> global; // (weight, local) -> basis index
    for (int w : weights) {
        const Complex& c = b.piece(w);
        H0Piece p;
        if (c.dim(0) > 0) {
            SparseMatrix into = c.diff(-1);
            for (int col = 0; col < into.cols(); ++col) {
                SparseVec bc = into.column(col);
                if (!bc.empty())
                    p.reducer.add_boundary(bc);
            }
            for (const SparseVec& z : kernel_basis(c.diff(0)))
                p.reducer.add_candidate(z);
            p.dim = p.reducer.classes();
        }
        for (int i = 0; i < p.dim; ++i) {
            global[{w, i}] = h.dim();
            std::ostringstream label;
            label << "h" << w << "_" << i;
            h.basis.push_back(HopfAlgebra::BasisElem{w, label.str()});
        }
        pieces.emplace(w, std::move(p));
    }
    if (pieces.at(0).dim != 1)
        throw MathError("coarse_moduli: H^0 at weight 0 is not 1-dimensional");
    h.unit = global.at({0, 0});

    auto rep_words = [&](int w, int i) {
        // representative cycle as a word sum
        WordSum s;
        const auto& words = b.words(w, 0);
        for (const auto& [idx, c] : pieces.at(w).reducer.representatives()[i])
            s[words[idx]] = c;
        return s;
    };

    // counit: coefficient of the empty-word class.
    h.counit.assign(h.dim(), Rat(0));
    h.counit[h.unit] = Rat(1);

    // products
    for (int wi : weights)
        for (int wj : weights) {
            if (b.weighted() && wi + wj > weight_bound)
                continue;
            for (int i = 0; i < pieces.at(wi).dim; ++i)
                for (int j = 0; j < pieces.at(wj).dim; ++j) {
                    WordSum prod = shuffle_product(ls, rep_words(wi, i), rep_words(wj, j));
                    bool in_basis = true;
                    SparseVec vec = words_to_vec(b, wi + wj, 0, prod,
                                                 b.weighted() ? nullptr : &in_basis);
                    if (!b.weighted() && !in_basis)
                        throw MathError("coarse_moduli: shuffle product exceeds the wordlength "
                                        "cap; refusing (raise the cap or supply weights)");
                    auto coords = pieces.at(wi + wj).reducer.coordinates(vec);
                    if (!coords)
                        throw MathError("coarse_moduli: product class does not reduce; "
                                        "input is not connective");
                    SparseVec out;
                    for (const auto& [loc, c] : *coords)
                        out.emplace_back(global.at({wi + wj, loc}), c);
                    h.mul[{global.at({wi, i}), global.at({wj, j})}] = sv_normalize(std::move(out));
                }
        }
    if (b.weighted())
        for (int i = 0; i < h.dim() && !h.truncated; ++i)
            for (int j = 0; j < h.dim(); ++j)
                if (h.basis[i].weight + h.basis[j].weight > weight_bound) {
                    h.truncated = true;
                    break;
                }

    // coproducts via the Kunneth basis of H^0(B_w1 (x) B_w2)
    std::map<std::pair<int, int>, Complex> tensors;
    std::map<std::pair<int, int>, QuotientReducer> treducers;
    auto tensor_block = [&](int w1, int w2) -> QuotientReducer& {
        auto key = std::make_pair(w1, w2);
        auto it = treducers.find(key);
        if (it != treducers.end())
            return it->second;
        Complex t = tensor_product(b.piece(w1), b.piece(w2));
        QuotientReducer q;
        SparseMatrix into = t.diff(-1);
        for (int col = 0; col < into.cols(); ++col) {
            SparseVec bc = into.column(col);
            if (!bc.empty())
                q.add_boundary(bc);
        }
        // Kunneth representatives u_i (x) v_j, in (i, j) lex order; under the
        // connectivity gate these exhaust H^0 of the block.
        std::map<std::pair<std::pair<int, int>, int>, int> pos;
        for (int k = 0; k < t.dim(0); ++k) {
            const auto& p = t.basis(0)[k].path; // [degL, idxL, degR, idxR]
            pos[{{p[0], p[1]}, p[3]}] = k;      // degR = -degL is implied
        }
        for (int i = 0; i < pieces.at(w1).dim; ++i)
            for (int j = 0; j < pieces.at(w2).dim; ++j) {
                const SparseVec& u = pieces.at(w1).reducer.representatives()[i];
                const SparseVec& v = pieces.at(w2).reducer.representatives()[j];
                SparseVec uv;
                for (const auto& [iu, cu] : u)
                    for (const auto& [iv, cv] : v) {
                        auto itp = pos.find({{0, iu}, iv});
                        if (itp == pos.end())
                            throw std::logic_error("coarse_moduli: Kunneth index missing");
                        uv.emplace_back(itp->second, cu * cv);
                    }
                if (!q.add_candidate(sv_normalize(std::move(uv))))
                    throw MathError("coarse_moduli: Kunneth classes are dependent; "
                                    "input is not connective");
            }
        tensors.emplace(key, std::move(t));
        return treducers.emplace(key, std::move(q)).first->second;
    };

    for (int w : weights) {
        for (int i = 0; i < pieces.at(w).dim; ++i) {
            std::vector<std::tuple<int, int, Rat>> entries;
            WordSum rep = rep_words(w, i);
            // split the deconcatenation by weight of the left part
            std::map<std::pair<int, int>, std::map<std::pair<BarWord, BarWord>, Rat>> split;
            for (const auto& [word, c] : rep)
                for (const auto& [pair, one] : deconcatenate(word)) {
                    int w1 = word_weight(ls, pair.first);
                    split[{w1, w - w1}][pair] += c * one;
                }
            for (auto& [ws, terms] : split) {
                auto [w1, w2] = ws;
                QuotientReducer& q = tensor_block(w1, w2);
                const Complex& t = tensors.at({w1, w2});
                // coordinates of the component inside the tensor block
                std::map<std::pair<std::pair<int, int>, std::pair<int, int>>, int> pos;
                for (int k = 0; k < t.dim(0); ++k) {
                    const auto& p = t.basis(0)[k].path;
                    pos[{{p[0], p[1]}, {p[2], p[3]}}] = k;
                }
                SparseVec comp;
                for (auto& [pair, c] : terms) {
                    if (is_zero(c))
                        continue;
                    int dl = word_degree(ls, pair.first);
                    int il = b.word_index(w1, dl, pair.first);
                    int ir = b.word_index(w2, -dl, pair.second);
                    if (il < 0 || ir < 0) {
                        if (!b.weighted())
                            throw MathError("coarse_moduli: coproduct leaves the cap");
                        throw std::logic_error("coarse_moduli: coproduct left the basis");
                    }
                    auto itp = pos.find({{dl, il}, {-dl, ir}});
                    if (itp == pos.end())
                        throw std::logic_error("coarse_moduli: tensor index missing");
                    comp.emplace_back(itp->second, c);
                }
                comp = sv_normalize(std::move(comp));
                auto coords = q.coordinates(comp);
                if (!coords)
                    throw MathError("coarse_moduli: coproduct class does not reduce to the "
                                    "Kunneth basis; input is not connective");
                const int d2 = pieces.at(w2).dim;
                for (const auto& [flat, c] : *coords) {
                    const int a = flat / d2, bidx = flat % d2;
                    entries.emplace_back(global.at({w1, a}), global.at({w2, bidx}), c);
                }
            }
            h.comul[global.at({w, i})] = std::move(entries);
        }
    }

    // antipode
    for (int w : weights)
        for (int i = 0; i < pieces.at(w).dim; ++i) {
            WordSum s = antipode(ls, rep_words(w, i));
            SparseVec vec = words_to_vec(b, w, 0, s);
            auto coords = pieces.at(w).reducer.coordinates(vec);
            if (!coords)
                throw MathError("coarse_moduli: antipode class does not reduce");
            SparseVec out;
            for (const auto& [loc, c] : *coords)
                out.emplace_back(global.at({w, loc}), c);
            h.antipode[global.at({w, i})] = sv_normalize(std::move(out));
        }

    return h;
}

// ---------------------------------------------------------------------------
// finite_group_hopf

HopfAlgebra finite_group_hopf(const std::vector<std::vector<int>>& table) {
    const int n = static_cast<int>(table.size());
    if (n == 0)
        throw MathError("finite_group_hopf: empty table");
    for (const auto& row : table) {
        if (static_cast<int>(row.size()) != n)
            throw MathError("finite_group_hopf: table is not square");
        for (int v : row)
            if (v < 0 || v >= n)
                throw MathError("finite_group_hopf: entry out of range");
    }
    // identity
    int e = -1;
    for (int cand = 0; cand < n; ++cand) {
        bool ok = true;
        for (int g = 0; g < n; ++g)
            if (table[cand][g] != g || table[g][cand] != g) {
                ok = false;
                break;
            }
        if (ok) {
            e = cand;
            break;
        }
    }
    if (e < 0)
        throw MathError("finite_group_hopf: not a group (no identity element)");
    // associativity
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (table[table[a][b]][c] != table[a][table[b][c]]) {
                    std::ostringstream os;
                    os << "finite_group_hopf: not a group (associativity fails at (" << a << ","
                       << b << "," << c << "))";
                    throw MathError(os.str());
                }
    // inverses
    std::vector<int> inv(n, -1);
    for (int g = 0; g < n; ++g) {
        for (int hh = 0; hh < n; ++hh)
            if (table[g][hh] == e && table[hh][g] == e) {
                inv[g] = hh;
                break;
            }
        if (inv[g] < 0) {
            std::ostringstream os;
            os << "finite_group_hopf: not a group (element " << g << " has no inverse)";
            throw MathError(os.str());
        }
    }

    HopfAlgebra h;
    h.name = "functions";
    h.truncated = false;
    for (int g = 0; g < n; ++g)
        h.basis.push_back(HopfAlgebra::BasisElem{0, "e" + std::to_string(g)});
    // The unit of the function algebra is sum of all indicators; we present
    // the Hopf algebra on the indicator basis and keep the unit as a basis
    // element only when the group is trivial. For n > 1 we extend the basis
    // with the unit expressed through the indicators.
    if (n == 1) {
        h.unit = 0;
        h.counit.assign(1, Rat(1));
        h.mul[{0, 0}] = SparseVec{{0, Rat(1)}};
        h.comul[0] = {{0, 0, Rat(1)}};
        h.antipode[0] = SparseVec{{0, Rat(1)}};
        return h;
    }
    // Indicator products and a genuine unit element: represent the unit as an
    // extra basis vector u with u = sum e_g enforced linearly? Keeping the
    // presentation honest: use the indicator basis; the unit element of the
    // algebra is sum_g e_g, which is not a basis vector. To stay within the
    // structure-constant format (unit must be a basis element), change basis:
    // b_0 = sum_g e_g (the unit), b_g = e_g for g != identity.
    h.basis.clear();
    h.basis.push_back(HopfAlgebra::BasisElem{0, "one"});
    std::vector<int> nonid;
    for (int g = 0; g < n; ++g)
        if (g != e)
            nonid.push_back(g);
    for (int g : nonid)
        h.basis.push_back(HopfAlgebra::BasisElem{0, "e" + std::to_string(g)});
    h.unit = 0;
    auto idx_of = [&](int g) -> int {
        // index of e_g in the new basis; e_identity = b_0 - sum_{g!=e} b_g
        auto it = std::find(nonid.begin(), nonid.end(), g);
        return it == nonid.end() ? -1 : 1 + static_cast<int>(it - nonid.begin());
    };
    auto indicator = [&](int g) -> SparseVec {
        if (g != e)
            return SparseVec{{idx_of(g), Rat(1)}};
        std::vector<std::pair<int, Rat>> terms{{0, Rat(1)}};
        for (int other : nonid)
            terms.emplace_back(idx_of(other), Rat(-1));
        return sv_normalize(std::move(terms));
    };
    auto from_indicators = [&](const std::map<int, Rat>& coeffs) {
        // expand sum c_g e_g in the new basis
        SparseVec out;
        for (const auto& [g, c] : coeffs)
            sv_axpy(out, c, indicator(g));
        return out;
    };

    const int m = h.dim();
    h.counit.assign(m, Rat(0));
    // counit = evaluation at the identity
    h.counit[0] = Rat(1); // one evaluates to 1
    // e_g(identity) = [g == e]; for g != e basis elements evaluate to 0.

    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            // pointwise product of the corresponding functions
            std::map<int, Rat> vals;
            auto value_at = [&](int bi, int g) -> Rat {
                if (bi == 0)
                    return Rat(1);
                return nonid[bi - 1] == g ? Rat(1) : Rat(0);
            };
            for (int g = 0; g < n; ++g) {
                Rat v = value_at(i, g) * value_at(j, g);
                if (!is_zero(v))
                    vals[g] = v;
            }
            h.mul[{i, j}] = from_indicators(vals);
        }

    for (int i = 0; i < m; ++i) {
        // coproduct dual to the group law: Delta f (g, h) = f(gh)
        std::map<std::pair<int, int>, Rat> pairs; // (g, h) -> value
        auto value_at = [&](int bi, int g) -> Rat {
            if (bi == 0)
                return Rat(1);
            return nonid[bi - 1] == g ? Rat(1) : Rat(0);
        };
        for (int g = 0; g < n; ++g)
            for (int k = 0; k < n; ++k) {
                Rat v = value_at(i, table[g][k]);
                if (!is_zero(v))
                    pairs[{g, k}] = v;
            }
        // expand as sum over indicator pairs, then convert both legs
        std::vector<std::tuple<int, int, Rat>> entries;
        std::map<std::pair<int, int>, Rat> acc;
        for (const auto& [gk, v] : pairs) {
            SparseVec lg = indicator(gk.first);
            SparseVec rg = indicator(gk.second);
            for (const auto& [a, ca] : lg)
                for (const auto& [bb, cb] : rg) {
                    acc[{a, bb}] += v * ca * cb;
                }
        }
        for (const auto& [ab, c] : acc)
            if (!is_zero(c))
                entries.emplace_back(ab.first, ab.second, c);
        h.comul[i] = std::move(entries);
    }

    for (int i = 0; i < m; ++i) {
        // antipode dual to inversion: S f (g) = f(g^{-1})
        std::map<int, Rat> vals;
        auto value_at = [&](int bi, int g) -> Rat {
            if (bi == 0)
                return Rat(1);
            return nonid[bi - 1] == g ? Rat(1) : Rat(0);
        };
        for (int g = 0; g < n; ++g) {
            Rat v = value_at(i, inv[g]);
            if (!is_zero(v))
                vals[g] = v;
        }
        h.antipode[i] = from_indicators(vals);
    }
    return h;
}

// ---------------------------------------------------------------------------
// group_points

int primitive_dimension(const HopfAlgebra& h) {
    // ker(counit) is spanned by b_i - counit(b_i) * unit; over the known
    // products, (ker counit)^2 is spanned by the reduced products.
    std::vector<int> nonunit;
    for (int i = 0; i < h.dim(); ++i)
        if (i != h.unit)
            nonunit.push_back(i);
    auto centered = [&](int i) {
        SparseVec v{{i, Rat(1)}};
        if (!is_zero(h.counit[i]))
            sv_axpy(v, -h.counit[i], SparseVec{{h.unit, Rat(1)}});
        return v;
    };
    // ker(counit) = span{b_i - counit(b_i) unit : i != unit}; dropping the
    // unit coordinate identifies it with the non-unit coordinates.
    EchelonBasis squares;
    for (int i : nonunit)
        for (int j : nonunit) {
            if (!h.mul_known(i, j))
                continue;
            SparseVec prod = mul_vec(h, centered(i), centered(j));
            SparseVec v;
            for (const auto& [k, c] : prod)
                if (k != h.unit)
                    v.emplace_back(k, c);
            squares.insert(v);
        }
    return static_cast<int>(nonunit.size()) - squares.rank();
}

namespace {

// Minimal polynomial of b_i in h via Krylov iteration on the element.
std::vector<Rat> min_poly(const HopfAlgebra& h, int elem) {
    // vectors: powers of b_elem expanded in the basis
    std::vector<SparseVec> powers;
    powers.push_back(SparseVec{{h.unit, Rat(1)}});
    EchelonBasis span;
    for (;;) {
        const SparseVec& last = powers.back();
        SparseVec residue = span.reduce(last);
        if (residue.empty())
            break;
        span.insert(last);
        powers.push_back(mul_vec(h, last, SparseVec{{elem, Rat(1)}}));
        if (powers.size() > static_cast<size_t>(h.dim()) + 2)
            throw std::logic_error("min_poly: no dependence found");
    }
    // the last power is dependent: solve sum_i c_i power_i + power_k = 0
    const int k = static_cast<int>(powers.size()) - 1;
    SparseMatrix aug(h.dim(), k + 1);
    for (int c = 0; c < k; ++c)
        for (const auto& [r, v] : powers[c])
            aug.add(r, c, v);
    for (const auto& [r, v] : powers[k])
        aug.add(r, k, v);
    // kernel of aug contains (x, 1) scaled
    for (const SparseVec& kv : kernel_basis(aug)) {
        const Rat* top = sv_at(kv, k);
        if (top && !is_zero(*top)) {
            std::vector<Rat> coeffs(k + 1, Rat(0));
            const Rat inv = Rat(1) / *top;
            for (const auto& [idx, v] : kv)
                coeffs[idx] = v * inv;
            return coeffs; // monic: coeffs[k] = 1
        }
    }
    throw std::logic_error("min_poly: dependence lost");
}

// Rational roots of a monic-in-lead rational polynomial, exactly.
std::vector<Rat> rational_roots(const std::vector<Rat>& poly) {
    // clear denominators to integer coefficients
    mpz_class lcm(1);
    for (const Rat& c : poly)
        if (!is_zero(c))
            lcm = lcm * c.get_den() / gcd(lcm, c.get_den());
    std::vector<mpz_class> ic;
    for (const Rat& c : poly)
        ic.push_back(c.get_num() * (lcm / c.get_den()));
    // strip trailing zero coefficients at the low end (root 0)
    std::vector<Rat> roots;
    size_t low = 0;
    while (low < ic.size() && ic[low] == 0)
        ++low;
    if (low > 0)
        roots.push_back(Rat(0));
    if (low >= ic.size())
        return roots;
    mpz_class a0 = abs(ic[low]);
    mpz_class an = abs(ic.back());
    auto divisors = [](const mpz_class& v) {
        std::vector<mpz_class> out;
        for (mpz_class d = 1; d * d <= v; ++d)
            if (v % d == 0) {
                out.push_back(d);
                out.push_back(v / d);
            }
        return out;
    };
    auto eval = [&](const Rat& x) {
        Rat acc(0);
        for (size_t i = ic.size(); i-- > low;)
            acc = acc * x + Rat(ic[i]);
        return acc;
    };
    for (const mpz_class& p : divisors(a0))
        for (const mpz_class& q : divisors(an))
            for (int s : {1, -1}) {
                Rat cand(s * p, q);
                cand.canonicalize();
                if (is_zero(eval(cand)))
                    roots.push_back(cand);
            }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

// All algebra maps h -> Q, exactly.
std::vector<std::vector<Rat>> rational_points(const HopfAlgebra& h) {
    const int n = h.dim();
    std::vector<std::vector<Rat>> candidates(n);
    for (int i = 0; i < n; ++i) {
        if (i == h.unit) {
            candidates[i] = {Rat(1)};
            continue;
        }
        candidates[i] = rational_roots(min_poly(h, i));
        if (candidates[i].empty())
            return {}; // no rational value possible: no points
    }
    std::vector<std::vector<Rat>> out;
    std::vector<Rat> cur(n, Rat(0));
    std::function<void(int)> rec = [&](int at) {
        if (at == n) {
            out.push_back(cur);
            return;
        }
        for (const Rat& v : candidates[at]) {
            cur[at] = v;
            // prune: check all products among assigned indices
            bool ok = true;
            for (int i = 0; i <= at && ok; ++i)
                for (int j = 0; j <= at && ok; ++j) {
                    if (!h.mul_known(i, j))
                        continue;
                    Rat lhs = cur[i] * cur[j];
                    Rat rhs(0);
                    bool complete = true;
                    for (const auto& [k, c] : h.product(i, j)) {
                        if (k > at) {
                            complete = false;
                            break;
                        }
                        rhs += c * cur[k];
                    }
                    if (complete && lhs != rhs)
                        ok = false;
                }
            if (ok)
                rec(at + 1);
        }
    };
    rec(0);
    return out;
}

} // namespace

GroupPoints group_points(const HopfAlgebra& h, AlgebraPtr target) {
    GroupPoints out;
    if (h.truncated) {
        int prim = primitive_dimension(h);
        if (prim > 0) {
            out.refused = true;
            out.variety_dimension = prim;
            std::ostringstream os;
            os << "infinite solution variety: the truncated Hopf algebra has a "
               << prim << "-dimensional primitive space (points form a variety of dimension >= "
               << prim << ")";
            out.refusal = os.str();
            return out;
        }
    }
    if (target->kind() != Algebra::Kind::StructConst)
        throw std::invalid_argument("group_points: target must be StructConst");
    ValidationReport tv = target->validate();
    if (!tv.ok)
        throw MathError("group_points: target algebra fails validation");
    for (const auto& e : target->sc_basis())
        if (e.degree != 0)
            throw MathError("group_points: target must be concentrated in degree 0");

    // Split the target into Q-factors via its rational characters.
    const int tdim = static_cast<int>(target->sc_basis().size());
    HopfAlgebra tAsAlg; // reuse the point solver on the target's algebra
    tAsAlg.truncated = false;
    for (int i = 0; i < tdim; ++i)
        tAsAlg.basis.push_back(HopfAlgebra::BasisElem{0, target->sc_basis()[i].name});
    tAsAlg.unit = target->sc_unit();
    tAsAlg.counit.assign(tdim, Rat(0)); // unused by the solver
    tAsAlg.counit[tAsAlg.unit] = Rat(1);
    for (int i = 0; i < tdim; ++i)
        for (int j = 0; j < tdim; ++j)
            tAsAlg.mul[{i, j}] = target->sc_mul(i, j);
    std::vector<std::vector<Rat>> chars = rational_points(tAsAlg);
    if (static_cast<int>(chars.size()) != tdim)
        throw MathError("group_points: target algebra does not split as a product of Q (found " +
                        std::to_string(chars.size()) + " characters for dimension " +
                        std::to_string(tdim) + ")");

    // Hom(h, T) = Hom(h, Q)^tdim via the characters.
    std::vector<std::vector<Rat>> qpoints = rational_points(h);
    // verify all equations exactly (DFS pruning is only partial)
    std::vector<std::vector<Rat>> verified;
    for (const auto& p : qpoints) {
        bool ok = true;
        for (const auto& [key, v] : h.mul) {
            Rat lhs = p[key.first] * p[key.second];
            Rat rhs(0);
            for (const auto& [k, c] : v)
                rhs += c * p[k];
            if (lhs != rhs) {
                ok = false;
                break;
            }
        }
        if (ok)
            verified.push_back(p);
    }

    // Points are stored in character coordinates: slot i*tdim + k holds
    // chi_k(phi(b_i)). In these coordinates multiplication in T is
    // componentwise, so the convolution law is a plain sum of products.
    std::vector<std::vector<Rat>> char_points;
    {
        const int np = static_cast<int>(verified.size());
        std::vector<int> pick(tdim, 0);
        std::function<void(int)> rec = [&](int at) {
            if (at == tdim) {
                std::vector<Rat> img(h.dim() * tdim, Rat(0));
                for (int i = 0; i < h.dim(); ++i)
                    for (int k = 0; k < tdim; ++k)
                        img[i * tdim + k] = verified[pick[k]][i];
                char_points.push_back(std::move(img));
                return;
            }
            for (pick[at] = 0; pick[at] < np; ++pick[at])
                rec(at + 1);
        };
        if (np > 0)
            rec(0);
    }

    const int npts = static_cast<int>(char_points.size());
    auto conv = [&](const std::vector<Rat>& f, const std::vector<Rat>& g) {
        std::vector<Rat> r(h.dim() * tdim, Rat(0));
        for (int i = 0; i < h.dim(); ++i) {
            auto it = h.comul.find(i);
            if (it == h.comul.end())
                throw std::logic_error("group_points: missing coproduct");
            for (int t = 0; t < tdim; ++t) {
                Rat acc(0);
                for (const auto& [a, bidx, c] : it->second)
                    acc += c * f[a * tdim + t] * g[bidx * tdim + t];
                r[i * tdim + t] = acc;
            }
        }
        return r;
    };
    auto find_point = [&](const std::vector<Rat>& p) -> int {
        for (int i = 0; i < npts; ++i)
            if (char_points[i] == p)
                return i;
        return -1;
    };
    out.law.assign(npts, std::vector<int>(npts, -1));
    for (int i = 0; i < npts; ++i)
        for (int j = 0; j < npts; ++j) {
            int k = find_point(conv(char_points[i], char_points[j]));
            if (k < 0)
                throw MathError("group_points: convolution left the point set (not a group?)");
            out.law[i][j] = k;
        }
    // identity = unit-of-T composed with the counit: every character of the
    // unit is 1, so the character coordinates are just counit(b_i).
    {
        std::vector<Rat> idp(h.dim() * tdim, Rat(0));
        for (int i = 0; i < h.dim(); ++i)
            for (int t = 0; t < tdim; ++t)
                idp[i * tdim + t] = h.counit[i];
        out.identity = find_point(idp);
    }

    // Convert stored points to T-basis coordinates for the caller (Dedekind
    // independence of distinct characters makes chi invertible).
    for (int pi = 0; pi < npts; ++pi) {
        std::vector<Rat> img(h.dim() * tdim, Rat(0));
        for (int i = 0; i < h.dim(); ++i) {
            SparseMatrix aug(tdim, tdim + 1);
            for (int k = 0; k < tdim; ++k) {
                for (int j = 0; j < tdim; ++j)
                    aug.add(k, j, chars[k][j]);
                aug.add(k, tdim, char_points[pi][i * tdim + k]);
            }
            Rref r = rref(aug);
            for (int rr = 0; rr < r.rank; ++rr) {
                if (r.pivot_cols[rr] == tdim)
                    throw MathError("group_points: inconsistent character solve");
                const Rat* rest = sv_at(r.rows[rr], tdim);
                img[i * tdim + r.pivot_cols[rr]] = rest ? *rest : Rat(0);
            }
        }
        out.points.push_back(std::move(img));
    }
    out.inverse.assign(npts, -1);
    for (int i = 0; i < npts; ++i)
        for (int j = 0; j < npts; ++j)
            if (out.law[i][j] == out.identity && out.law[j][i] == out.identity) {
                out.inverse[i] = j;
                break;
            }
    if (out.identity < 0)
        throw MathError("group_points: identity point missing");
    for (int i = 0; i < npts; ++i)
        if (out.inverse[i] < 0)
            throw MathError("group_points: point without inverse");
    for (int a = 0; a < npts; ++a)
        for (int b2 = 0; b2 < npts; ++b2)
            for (int c = 0; c < npts; ++c)
                if (out.law[out.law[a][b2]][c] != out.law[a][out.law[b2][c]])
                    throw MathError("group_points: convolution is not associative");
    return out;
}

} // namespace dgbar
