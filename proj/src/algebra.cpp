#include "dgbar/algebra.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace dgbar {

int Monomial::length() const {
    int n = 0;
    for (const auto& [g, e] : factors)
        n += e;
    return n;
}

namespace {

// Expanded generator-index sequence, for the graded-lex (name sequence) order.
std::vector<int> expand(const Monomial& m) {
    std::vector<int> seq;
    for (const auto& [g, e] : m.factors)
        for (int k = 0; k < e; ++k)
            seq.push_back(g);
    return seq;
}

// Substitute g -> g + sign*offset[g] into a polynomial; offsets live only on
// even degree-0 generators, so the expansion is a plain binomial.
FreeElem substitute_offsets(const std::vector<Rat>& offsets, const FreeElem& e, int sign) {
    FreeElem out;
    for (const auto& [m, c] : e) {
        std::vector<std::pair<Monomial, Rat>> partial{{Monomial{}, c}};
        for (const auto& [g, exp] : m.factors) {
            Rat off = offsets[g] * sign;
            std::vector<std::pair<Monomial, Rat>> next;
            if (is_zero(off)) {
                for (auto& [pm, pc] : partial) {
                    Monomial q = pm;
                    q.factors.emplace_back(g, exp);
                    next.emplace_back(std::move(q), pc);
                }
            } else {
                for (auto& [pm, pc] : partial) {
                    Rat binom(1);
                    for (int k = exp; k >= 0; --k) {
                        Rat coeff = pc * binom;
                        for (int t = 0; t < exp - k; ++t)
                            coeff *= off;
                        Monomial q = pm;
                        if (k > 0)
                            q.factors.emplace_back(g, k);
                        next.emplace_back(std::move(q), coeff);
                        if (k > 0)
                            binom = binom * k / (exp - k + 1);
                    }
                }
            }
            partial = std::move(next);
        }
        for (auto& [pm, pc] : partial) {
            auto [it, fresh] = out.try_emplace(pm, pc);
            if (!fresh) {
                it->second += pc;
                if (is_zero(it->second))
                    out.erase(it);
            }
        }
    }
    return out;
}

} // namespace

Algebra Algebra::free_gc(std::string name, std::vector<Generator> gens,
                         std::map<std::string, FreeElem> diff_by_name,
                         std::map<std::string, Rat> aug_by_name, bool mixed_tate) {
    Algebra a;
    a.kind_ = Kind::FreeGC;
    a.name_ = std::move(name);
    a.mixed_tate_ = mixed_tate;

    // Generators are canonically sorted by name; inputs arrive keyed by the
    // caller's own indices via names, so re-map after sorting.
    std::sort(gens.begin(), gens.end(),
              [](const Generator& x, const Generator& y) { return x.name < y.name; });
    for (size_t i = 1; i < gens.size(); ++i)
        if (gens[i].name == gens[i - 1].name)
            throw std::invalid_argument("free_gc: duplicate generator name '" + gens[i].name + "'");
    a.gens_ = std::move(gens);
    a.gen_diff_.resize(a.gens_.size());
    a.gen_aug_.assign(a.gens_.size(), Rat(0));
    for (size_t i = 0; i < a.gens_.size(); ++i) {
        auto it = aug_by_name.find(a.gens_[i].name);
        if (it != aug_by_name.end())
            a.gen_aug_[i] = it->second;
    }

    // Recentre: substitute g -> g + aug(g) into the differential polynomials
    // so stored monomials generate ker t. Only degree-0 weight-0 generators
    // may carry a nonzero augmentation (validate() reports others).
    for (size_t i = 0; i < a.gens_.size(); ++i) {
        auto it = diff_by_name.find(a.gens_[i].name);
        if (it != diff_by_name.end())
            a.gen_diff_[i] = substitute_offsets(a.gen_aug_, it->second, 1);
    }
    return a;
}

FreeElem Algebra::gen_diff_presented(int g) const {
    return substitute_offsets(gen_aug_, gen_diff_[g], -1);
}

Algebra Algebra::struct_const(std::string name, std::vector<SCElem> basis, int unit_index,
                              std::map<std::pair<int, int>, SparseVec> mul,
                              std::map<int, SparseVec> diff, std::vector<Rat> aug,
                              bool mixed_tate) {
    Algebra a;
    a.kind_ = Kind::StructConst;
    a.name_ = std::move(name);
    a.mixed_tate_ = mixed_tate;
    const int n = static_cast<int>(basis.size());
    if (unit_index < 0 || unit_index >= n)
        throw std::invalid_argument("struct_const: unit index out of range");
    a.sc_ = std::move(basis);
    a.unit_ = unit_index;
    a.sc_aug_ = std::move(aug);
    a.sc_aug_.resize(n, Rat(0));
    a.sc_aug_[unit_index] = Rat(1);
    a.sc_mul_.assign(n, std::vector<SparseVec>(n));
    // Products with the unit are implied; everything else defaults to zero.
    for (int i = 0; i < n; ++i) {
        a.sc_mul_[unit_index][i] = SparseVec{{i, Rat(1)}};
        a.sc_mul_[i][unit_index] = SparseVec{{i, Rat(1)}};
    }
    for (auto& [key, v] : mul) {
        auto [i, j] = key;
        if (i < 0 || i >= n || j < 0 || j >= n)
            throw std::invalid_argument("struct_const: product index out of range");
        a.sc_mul_[i][j] = sv_normalize(std::move(v));
    }
    a.sc_diff_.assign(n, SparseVec{});
    for (auto& [i, v] : diff) {
        if (i < 0 || i >= n)
            throw std::invalid_argument("struct_const: differential index out of range");
        a.sc_diff_[i] = sv_normalize(std::move(v));
    }
    return a;
}

int Algebra::gen_index(const std::string& name) const {
    for (size_t i = 0; i < gens_.size(); ++i)
        if (gens_[i].name == name)
            return static_cast<int>(i);
    return -1;
}

int Algebra::sc_index(const std::string& name) const {
    for (size_t i = 0; i < sc_.size(); ++i)
        if (sc_[i].name == name)
            return static_cast<int>(i);
    return -1;
}

int Algebra::mono_degree(const Monomial& m) const {
    int d = 0;
    for (const auto& [g, e] : m.factors)
        d += gens_[g].degree * e;
    return d;
}

int Algebra::mono_weight(const Monomial& m) const {
    int w = 0;
    for (const auto& [g, e] : m.factors)
        w += gens_[g].weight * e;
    return w;
}

FreeElem Algebra::poly_scale(const FreeElem& a, const Rat& c) {
    FreeElem out;
    if (is_zero(c))
        return out;
    for (const auto& [m, v] : a)
        out[m] = v * c;
    return out;
}

FreeElem Algebra::poly_add(FreeElem a, const FreeElem& b) {
    for (const auto& [m, v] : b) {
        auto [it, fresh] = a.try_emplace(m, v);
        if (!fresh) {
            it->second += v;
            if (is_zero(it->second))
                a.erase(it);
        }
    }
    return a;
}

std::pair<Rat, Monomial> Algebra::mono_mul(const Monomial& a, const Monomial& b) const {
    // Koszul sign: each factor of b moved left past a factor of a with a
    // larger generator index contributes (-1)^{deg*deg}.
    long swaps = 0;
    for (const auto& [gb, eb] : b.factors) {
        if (gens_[gb].degree % 2 == 0)
            continue;
        for (const auto& [ga, ea] : a.factors) {
            if (gens_[ga].degree % 2 == 0)
                continue;
            if (ga > gb)
                swaps += static_cast<long>(ea) * eb;
        }
    }
    Monomial out;
    size_t i = 0, j = 0;
    while (i < a.factors.size() || j < b.factors.size()) {
        if (j == b.factors.size() ||
            (i < a.factors.size() && a.factors[i].first < b.factors[j].first)) {
            out.factors.push_back(a.factors[i++]);
        } else if (i == a.factors.size() || b.factors[j].first < a.factors[i].first) {
            out.factors.push_back(b.factors[j++]);
        } else {
            const int g = a.factors[i].first;
            if (gens_[g].degree % 2 != 0)
                return {Rat(0), Monomial{}}; // odd generator squares to zero
            out.factors.emplace_back(g, a.factors[i].second + b.factors[j].second);
            ++i;
            ++j;
        }
    }
    return {swaps % 2 == 0 ? Rat(1) : Rat(-1), std::move(out)};
}

FreeElem Algebra::poly_mul(const FreeElem& a, const FreeElem& b) const {
    FreeElem out;
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b) {
            auto [sign, m] = mono_mul(ma, mb);
            if (is_zero(sign))
                continue;
            Rat c = ca * cb * sign;
            auto [it, fresh] = out.try_emplace(m, c);
            if (!fresh) {
                it->second += c;
                if (is_zero(it->second))
                    out.erase(it);
            }
        }
    return out;
}

FreeElem Algebra::poly_d(const FreeElem& a) const {
    FreeElem out;
    for (const auto& [m, c] : a) {
        int prefix_deg = 0;
        for (size_t i = 0; i < m.factors.size(); ++i) {
            const auto [g, e] = m.factors[i];
            const FreeElem& dg = gen_diff_[g];
            if (!dg.empty()) {
                Monomial left;
                left.factors.assign(m.factors.begin(), m.factors.begin() + i);
                if (e > 1)
                    left.factors.emplace_back(g, e - 1);
                Monomial right;
                right.factors.assign(m.factors.begin() + i + 1, m.factors.end());
                const Rat sign = (prefix_deg % 2 == 0) ? Rat(1) : Rat(-1);
                for (const auto& [dm, dc] : dg) {
                    auto [s1, lm] = mono_mul(left, dm);
                    if (is_zero(s1))
                        continue;
                    auto [s2, full] = mono_mul(lm, right);
                    if (is_zero(s2))
                        continue;
                    Rat coeff = c * dc * sign * s1 * s2 * e;
                    auto [it, fresh] = out.try_emplace(full, coeff);
                    if (!fresh) {
                        it->second += coeff;
                        if (is_zero(it->second))
                            out.erase(it);
                    }
                }
            }
            prefix_deg += gens_[g].degree * e;
        }
    }
    return out;
}

Rat Algebra::poly_aug(const FreeElem& a) const {
    auto it = a.find(Monomial{});
    return it == a.end() ? Rat(0) : it->second;
}

std::optional<std::pair<int, int>> Algebra::poly_bidegree(const FreeElem& a) const {
    std::optional<std::pair<int, int>> bd;
    for (const auto& [m, c] : a) {
        std::pair<int, int> here{mono_weight(m), mono_degree(m)};
        if (bd && *bd != here)
            return std::nullopt;
        bd = here;
    }
    return bd;
}

SparseVec Algebra::vec_mul(const SparseVec& a, const SparseVec& b) const {
    std::vector<std::pair<int, Rat>> terms;
    for (const auto& [i, ci] : a)
        for (const auto& [j, cj] : b)
            for (const auto& [k, ck] : sc_mul_[i][j])
                terms.emplace_back(k, ci * cj * ck);
    return sv_normalize(std::move(terms));
}

SparseVec Algebra::vec_d(const SparseVec& a) const {
    std::vector<std::pair<int, Rat>> terms;
    for (const auto& [i, ci] : a)
        for (const auto& [k, ck] : sc_diff_[i])
            terms.emplace_back(k, ci * ck);
    return sv_normalize(std::move(terms));
}

Rat Algebra::vec_aug(const SparseVec& a) const {
    Rat t(0);
    for (const auto& [i, ci] : a)
        t += ci * sc_aug_[i];
    return t;
}

int Algebra::min_gen_degree() const {
    int m = 0;
    bool first = true;
    if (kind_ == Kind::FreeGC) {
        for (const auto& g : gens_) {
            m = first ? g.degree : std::min(m, g.degree);
            first = false;
        }
    } else {
        for (int i = 0; i < static_cast<int>(sc_.size()); ++i) {
            if (i == unit_)
                continue;
            m = first ? sc_[i].degree : std::min(m, sc_[i].degree);
            first = false;
        }
    }
    return m;
}

int Algebra::max_gen_degree() const {
    int m = 0;
    bool first = true;
    if (kind_ == Kind::FreeGC) {
        for (const auto& g : gens_) {
            m = first ? g.degree : std::max(m, g.degree);
            first = false;
        }
    } else {
        for (int i = 0; i < static_cast<int>(sc_.size()); ++i) {
            if (i == unit_)
                continue;
            m = first ? sc_[i].degree : std::max(m, sc_[i].degree);
            first = false;
        }
    }
    return m;
}

bool Algebra::freegc_degreewise_finite() const {
    if (gens_.empty())
        return true;
    bool all_pos = true, all_neg = true;
    for (const auto& g : gens_) {
        if (g.degree <= 0)
            all_pos = false;
        if (g.degree >= 0)
            all_neg = false;
    }
    return all_pos || all_neg;
}

void Algebra::enumerate(std::vector<Monomial>& out, Monomial& cur, int next_gen,
                        std::optional<int> want_weight, std::optional<int> want_degree,
                        int cur_weight, int cur_degree, int cur_len,
                        std::optional<int> length_cap) const {
    const bool has_w = want_weight.has_value();
    const int want_w = want_weight.value_or(0);
    const bool has_d = want_degree.has_value();
    const int want_d = want_degree.value_or(0);
    const bool has_cap = length_cap.has_value();
    const int cap = length_cap.value_or(0);

    if (next_gen == static_cast<int>(gens_.size())) {
        if (cur_len == 0)
            return; // unit is not an augmentation-ideal element
        if (has_w && cur_weight != want_w)
            return;
        if (has_d && cur_degree != want_d)
            return;
        out.push_back(cur);
        return;
    }
    const Generator& g = gens_[next_gen];
    int max_exp = (g.degree % 2 != 0) ? 1 : -1; // -1: determined by a budget below
    auto tighten = [&max_exp](int bound) {
        if (bound < 0)
            bound = 0;
        if (max_exp < 0 || bound < max_exp)
            max_exp = bound;
    };
    if (has_w && g.weight > 0)
        tighten((want_w - cur_weight) / g.weight);
    if (has_d && g.degree != 0)
        tighten((want_d - cur_degree) / g.degree);
    if (has_cap)
        tighten(cap - cur_len);
    if (max_exp < 0)
        throw MathError("basis enumeration: generator '" + g.name +
                        "' admits unbounded exponents in the requested bidegree");
    for (int e = 0; e <= max_exp; ++e) {
        if (has_w && g.weight >= 0 && cur_weight + e * g.weight > want_w)
            break;
        if (e > 0)
            cur.factors.emplace_back(next_gen, e);
        enumerate(out, cur, next_gen + 1, want_weight, want_degree,
                  cur_weight + e * g.weight, cur_degree + e * g.degree, cur_len + e, length_cap);
        if (e > 0)
            cur.factors.pop_back();
    }
}

namespace {

struct GradedLess {
    const Algebra* a;
    bool operator()(const Monomial& x, const Monomial& y) const {
        const int wx = a->mono_weight(x), wy = a->mono_weight(y);
        if (wx != wy)
            return wx < wy;
        const int dx = a->mono_degree(x), dy = a->mono_degree(y);
        if (dx != dy)
            return dx < dy;
        return expand(x) < expand(y);
    }
};

} // namespace

std::vector<Monomial> Algebra::basis_in_bidegree(int weight, int degree,
                                                 std::optional<int> length_cap) const {
    if (kind_ != Kind::FreeGC)
        throw std::logic_error("basis_in_bidegree: FreeGC only (StructConst bases are explicit)");
    bool all_wt_pos = !gens_.empty();
    for (const auto& g : gens_)
        if (g.weight <= 0)
            all_wt_pos = false;
    if (gens_.empty())
        all_wt_pos = true; // vacuous; enumeration is trivially finite
    if (!all_wt_pos && !length_cap)
        throw MathError("basis_in_bidegree: infinite-basis condition (generator of "
                        "non-positive weight and no monomial-length cap); refusing");
    std::vector<Monomial> out;
    Monomial cur;
    enumerate(out, cur, 0, weight, degree, 0, 0, 0, length_cap);
    std::sort(out.begin(), out.end(), GradedLess{this});
    return out;
}

std::vector<Monomial> Algebra::monomials_of_weight(int weight) const {
    if (kind_ != Kind::FreeGC)
        throw std::logic_error("monomials_of_weight: FreeGC only");
    for (const auto& g : gens_)
        if (g.weight <= 0)
            throw MathError("positivity violation: generator '" + g.name +
                            "' has weight " + std::to_string(g.weight) +
                            " but the weighted pipeline needs weights >= 1");
    std::vector<Monomial> out;
    Monomial cur;
    enumerate(out, cur, 0, weight, std::nullopt, 0, 0, 0, std::nullopt);
    std::sort(out.begin(), out.end(), GradedLess{this});
    return out;
}

std::vector<Monomial> Algebra::monomials_of_degree(int degree) const {
    if (kind_ != Kind::FreeGC)
        throw std::logic_error("monomials_of_degree: FreeGC only");
    if (!freegc_degreewise_finite())
        throw MathError("infinite bidegree: unweighted free algebra with generator degrees "
                        "not all positive or all negative; supply weights or use StructConst");
    std::vector<Monomial> out;
    Monomial cur;
    enumerate(out, cur, 0, std::nullopt, degree, 0, 0, 0, std::nullopt);
    std::sort(out.begin(), out.end(), GradedLess{this});
    return out;
}

std::string Algebra::mono_str(const Monomial& m) const {
    if (m.is_unit())
        return "1";
    std::ostringstream os;
    bool first = true;
    for (const auto& [g, e] : m.factors) {
        if (!first)
            os << "*";
        os << gens_[g].name;
        if (e > 1)
            os << "^" << e;
        first = false;
    }
    return os.str();
}

std::string Algebra::poly_str(const FreeElem& e) const {
    if (e.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : e) {
        if (!first)
            os << " + ";
        if (c != 1 || m.is_unit())
            os << rat_str(c) << (m.is_unit() ? "" : "*");
        os << (m.is_unit() ? "" : mono_str(m));
        first = false;
    }
    return os.str();
}

std::string Algebra::vec_str(const SparseVec& v) const {
    if (v.empty())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [i, c] : v) {
        if (!first)
            os << " + ";
        if (c != 1)
            os << rat_str(c) << "*";
        os << sc_[i].name;
        first = false;
    }
    return os.str();
}

ValidationReport Algebra::validate() const {
    ValidationReport rep;
    if (kind_ == Kind::FreeGC) {
        for (size_t g = 0; g < gens_.size(); ++g) {
            const Generator& gen = gens_[g];
            // t is a degree-0 weight-0 algebra map: nonzero values are only
            // consistent on degree-0 weight-0 generators.
            if (!is_zero(gen_aug_[g]) && (gen.degree != 0 || gen.weight != 0))
                rep.fail("aug(" + gen.name + ") != 0 but generator has degree " +
                         std::to_string(gen.degree) + ", weight " + std::to_string(gen.weight) +
                         "; t must kill it");
            const FreeElem& dg = gen_diff_[g];
            for (const auto& [m, c] : dg) {
                if (mono_degree(m) != gen.degree + 1)
                    rep.fail("d(" + gen.name + ") contains " + mono_str(m) +
                             " of degree " + std::to_string(mono_degree(m)) +
                             ", expected " + std::to_string(gen.degree + 1));
                if (mono_weight(m) != gen.weight)
                    rep.fail("d(" + gen.name + ") contains " + mono_str(m) +
                             " of weight " + std::to_string(mono_weight(m)) +
                             ", expected " + std::to_string(gen.weight));
            }
            // t(d g) = 0: after recentring this is the constant term.
            if (!is_zero(poly_aug(dg)))
                rep.fail("t(d " + gen.name + ") != 0");
            // d^2 = 0 on generators.
            FreeElem dd = poly_d(dg);
            if (!dd.empty())
                rep.fail("d^2(" + gen.name + ") = " + poly_str(dd) + " != 0");
        }
        // Leibniz on generator pairs (forced by construction; still executed).
        for (size_t g = 0; g < gens_.size(); ++g)
            for (size_t h = 0; h < gens_.size(); ++h) {
                FreeElem xg{{Monomial{{{static_cast<int>(g), 1}}}, Rat(1)}};
                FreeElem xh{{Monomial{{{static_cast<int>(h), 1}}}, Rat(1)}};
                FreeElem prod = poly_mul(xg, xh);
                FreeElem lhs = poly_d(prod);
                FreeElem rhs = poly_add(
                    poly_mul(gen_diff_[g], xh),
                    poly_scale(poly_mul(xg, gen_diff_[h]),
                               gens_[g].degree % 2 == 0 ? Rat(1) : Rat(-1)));
                if (poly_add(lhs, poly_scale(rhs, Rat(-1))) != FreeElem{})
                    rep.fail("Leibniz fails on pair (" + gens_[g].name + ", " + gens_[h].name + ")");
            }
        return rep;
    }

    const int n = static_cast<int>(sc_.size());
    if (n == 0) {
        rep.fail("StructConst algebra with empty basis");
        return rep;
    }
    const SCElem& u = sc_[unit_];
    if (u.degree != 0 || u.weight != 0)
        rep.fail("unit '" + u.name + "' must have degree 0 and weight 0");
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (sc_[i].name == sc_[j].name)
                rep.fail("duplicate basis name '" + sc_[i].name + "'");

    auto elem = [](int i) { return SparseVec{{i, Rat(1)}}; };
    auto bidegree_ok = [&](const SparseVec& v, int deg, int wt) {
        for (const auto& [k, c] : v)
            if (sc_[k].degree != deg || sc_[k].weight != wt)
                return false;
        return true;
    };

    for (int i = 0; i < n; ++i) {
        // unit laws (the table may override the implied entries)
        if (!sv_equal(sc_mul_[unit_][i], elem(i)) || !sv_equal(sc_mul_[i][unit_], elem(i)))
            rep.fail("unit law fails at basis element '" + sc_[i].name + "'");
        if (!bidegree_ok(sc_diff_[i], sc_[i].degree + 1, sc_[i].weight))
            rep.fail("d(" + sc_[i].name + ") is not homogeneous of degree+1, same weight");
        if (!is_zero(vec_aug(sc_diff_[i])))
            rep.fail("t(d " + sc_[i].name + ") != 0");
        if (!vec_d(sc_diff_[i]).empty())
            rep.fail("d^2(" + sc_[i].name + ") != 0");
        if (!is_zero(sc_aug_[i]) && (sc_[i].degree != 0 || sc_[i].weight != 0) && i != unit_)
            rep.fail("aug(" + sc_[i].name + ") != 0 on an element of nonzero degree or weight");
    }

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const SparseVec& ij = sc_mul_[i][j];
            if (!bidegree_ok(ij, sc_[i].degree + sc_[j].degree, sc_[i].weight + sc_[j].weight))
                rep.fail("product " + sc_[i].name + "*" + sc_[j].name +
                         " is not homogeneous (degree/weight additivity)");
            // graded commutativity
            const bool odd = (sc_[i].degree % 2 != 0) && (sc_[j].degree % 2 != 0);
            SparseVec ji = sv_scaled(sc_mul_[j][i], odd ? Rat(-1) : Rat(1));
            if (!sv_equal(ij, ji))
                rep.fail("graded commutativity fails on (" + sc_[i].name + ", " + sc_[j].name + ")");
            // Leibniz
            SparseVec lhs = vec_d(ij);
            SparseVec rhs = vec_mul(sc_diff_[i], elem(j));
            SparseVec rhs2 = sv_scaled(vec_mul(elem(i), sc_diff_[j]),
                                       sc_[i].degree % 2 == 0 ? Rat(1) : Rat(-1));
            sv_axpy(rhs, Rat(1), rhs2);
            if (!sv_equal(lhs, rhs))
                rep.fail("Leibniz fails on (" + sc_[i].name + ", " + sc_[j].name + ")");
            // t multiplicative
            if (vec_aug(ij) != sc_aug_[i] * sc_aug_[j])
                rep.fail("t(" + sc_[i].name + "*" + sc_[j].name + ") != t*t");
        }

    // Full associativity: cheap at these sizes and every downstream oracle
    // depends on it.
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                SparseVec l = vec_mul(sc_mul_[i][j], elem(k));
                SparseVec r = vec_mul(elem(i), sc_mul_[j][k]);
                if (!sv_equal(l, r)) {
                    rep.fail("associativity fails on (" + sc_[i].name + ", " + sc_[j].name +
                             ", " + sc_[k].name + ")");
                    goto assoc_done;
                }
            }
assoc_done:
    return rep;
}

// ---------------------------------------------------------------------------
// LetterSystem

LetterSystem LetterSystem::weighted(AlgebraPtr a, int weight_bound) {
    LetterSystem ls;
    ls.alg_ = std::move(a);
    ls.weighted_mode_ = true;
    ls.weight_bound_ = weight_bound;
    const Algebra& A = *ls.alg_;
    if (A.kind() == Algebra::Kind::FreeGC) {
        for (int w = 1; w <= weight_bound; ++w)
            for (const Monomial& m : A.monomials_of_weight(w)) {
                ls.mono_id_[m] = static_cast<int>(ls.letters_.size());
                ls.letters_.push_back(Letter{A.mono_degree(m), w, m, -1});
            }
    } else {
        const auto& basis = A.sc_basis();
        ls.sc_id_.assign(basis.size(), -1);
        // collect (weight, degree, index) sorted
        std::vector<std::tuple<int, int, int>> keys;
        for (int i = 0; i < static_cast<int>(basis.size()); ++i) {
            if (i == A.sc_unit())
                continue;
            if (basis[i].weight <= 0)
                throw MathError("positivity violation: basis element '" + basis[i].name +
                                "' has weight " + std::to_string(basis[i].weight));
            if (basis[i].weight > weight_bound)
                continue;
            keys.emplace_back(basis[i].weight, basis[i].degree, i);
        }
        std::sort(keys.begin(), keys.end());
        for (auto [w, d, i] : keys) {
            ls.sc_id_[i] = static_cast<int>(ls.letters_.size());
            ls.letters_.push_back(Letter{d, w, Monomial{}, i});
        }
    }
    ls.build_tables(true);
    return ls;
}

LetterSystem LetterSystem::unweighted(AlgebraPtr a, int susp_lo, int susp_hi) {
    LetterSystem ls;
    ls.alg_ = std::move(a);
    ls.weighted_mode_ = false;
    ls.susp_lo_ = susp_lo;
    ls.susp_hi_ = susp_hi;
    const Algebra& A = *ls.alg_;
    if (A.kind() == Algebra::Kind::FreeGC) {
        for (int s = susp_lo; s <= susp_hi; ++s) {
            for (const Monomial& m : A.monomials_of_degree(s + 1)) {
                ls.mono_id_[m] = static_cast<int>(ls.letters_.size());
                ls.letters_.push_back(Letter{s + 1, A.mono_weight(m), m, -1});
            }
        }
    } else {
        const auto& basis = A.sc_basis();
        ls.sc_id_.assign(basis.size(), -1);
        std::vector<std::tuple<int, int, int>> keys;
        for (int i = 0; i < static_cast<int>(basis.size()); ++i) {
            if (i == A.sc_unit())
                continue;
            keys.emplace_back(basis[i].weight, basis[i].degree, i);
        }
        std::sort(keys.begin(), keys.end());
        for (auto [w, d, i] : keys) {
            ls.sc_id_[i] = static_cast<int>(ls.letters_.size());
            ls.letters_.push_back(Letter{d, w, Monomial{}, i});
        }
    }
    ls.build_tables(false);
    return ls;
}

int LetterSystem::id_of_mono(const Monomial& m) const {
    auto it = mono_id_.find(m);
    return it == mono_id_.end() ? -1 : it->second;
}

SparseVec LetterSystem::to_letters(const FreeElem& e) const {
    std::vector<std::pair<int, Rat>> terms;
    for (const auto& [m, c] : e) {
        if (m.is_unit())
            throw MathError("letter conversion: unexpected unit component (augmentation leak)");
        int id = id_of_mono(m);
        if (id < 0) {
            if (weighted_mode_)
                throw std::logic_error("letter outside weighted range: " +
                                       alg_->mono_str(m));
            continue; // outside the materialized window: truncated away
        }
        terms.emplace_back(id, c);
    }
    return sv_normalize(std::move(terms));
}

SparseVec LetterSystem::to_letters_sc(const SparseVec& raw) const {
    // raw is a vector over the sc basis; rewrite over centered letters.
    const Algebra& A = *alg_;
    Rat unit_part(0);
    std::vector<std::pair<int, Rat>> terms;
    for (const auto& [k, c] : raw) {
        if (k == A.sc_unit()) {
            unit_part += c;
            continue;
        }
        unit_part += c * A.sc_aug(k);
        int id = sc_id_[k];
        if (id < 0) {
            if (weighted_mode_)
                continue; // weight above the bound; unreachable in bar use
            throw std::logic_error("letter outside range for sc element");
        }
        terms.emplace_back(id, c);
    }
    if (!is_zero(unit_part))
        throw MathError("letter conversion: product/differential leaks out of the "
                        "augmentation ideal");
    return sv_normalize(std::move(terms));
}

void LetterSystem::build_tables(bool in_range_required) {
    const Algebra& A = *alg_;
    const int n = count();
    diff_.resize(n);
    for (int i = 0; i < n; ++i) {
        if (A.kind() == Algebra::Kind::FreeGC) {
            FreeElem e{{letters_[i].mono, Rat(1)}};
            diff_[i] = to_letters(A.poly_d(e));
        } else {
            diff_[i] = to_letters_sc(A.sc_diff(letters_[i].sc_index));
        }
    }
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (weighted_mode_ && letters_[i].weight + letters_[j].weight > weight_bound_)
                continue; // never queried: bar words stay within the bound
            if (A.kind() == Algebra::Kind::FreeGC) {
                auto [sign, m] = A.mono_mul(letters_[i].mono, letters_[j].mono);
                if (is_zero(sign)) {
                    mul_[{i, j}] = SparseVec{};
                } else {
                    int id = id_of_mono(m);
                    if (id < 0) {
                        if (in_range_required)
                            throw std::logic_error("product letter outside range");
                        mul_[{i, j}] = SparseVec{}; // truncated by the window
                    } else {
                        mul_[{i, j}] = SparseVec{{id, sign}};
                    }
                }
            } else {
                // centered product: (b_i - t_i)(b_j - t_j)
                const int bi = letters_[i].sc_index, bj = letters_[j].sc_index;
                SparseVec vi{{bi, Rat(1)}};
                if (!is_zero(A.sc_aug(bi)))
                    sv_axpy(vi, Rat(-1), SparseVec{{A.sc_unit(), A.sc_aug(bi)}});
                SparseVec vj{{bj, Rat(1)}};
                if (!is_zero(A.sc_aug(bj)))
                    sv_axpy(vj, Rat(-1), SparseVec{{A.sc_unit(), A.sc_aug(bj)}});
                mul_[{i, j}] = to_letters_sc(A.vec_mul(vi, vj));
            }
        }
}

const SparseVec& LetterSystem::mul(int i, int j) const {
    auto it = mul_.find({i, j});
    if (it == mul_.end())
        throw std::logic_error("LetterSystem::mul: pair outside precomputed range");
    return it->second;
}

std::string LetterSystem::display(int id) const {
    const Letter& l = letters_[id];
    if (l.sc_index >= 0) {
        const auto& e = alg_->sc_basis()[l.sc_index];
        if (is_zero(alg_->sc_aug(l.sc_index)))
            return e.name;
        return "(" + e.name + "-" + rat_str(alg_->sc_aug(l.sc_index)) + ")";
    }
    return alg_->mono_str(l.mono);
}

} // namespace dgbar
