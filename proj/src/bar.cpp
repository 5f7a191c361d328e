#include "dgbar/bar.hpp"

#include "dgbar/parallel.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace dgbar {

const std::vector<BarWord> BarComplex::kNoWords{};

int word_degree(const LetterSystem& ls, const BarWord& w) {
    int d = 0;
    for (int id : w.letters)
        d += ls.susp(id);
    return d;
}

int word_weight(const LetterSystem& ls, const BarWord& w) {
    int t = 0;
    for (int id : w.letters)
        t += ls.weight(id);
    return t;
}

void add_term(WordSum& s, const BarWord& w, const Rat& c) {
    if (is_zero(c))
        return;
    auto [it, fresh] = s.try_emplace(w, c);
    if (!fresh) {
        it->second += c;
        if (is_zero(it->second))
            s.erase(it);
    }
}

WordSum sum_scale(const WordSum& s, const Rat& c) {
    WordSum out;
    if (is_zero(c))
        return out;
    for (const auto& [w, v] : s)
        out[w] = v * c;
    return out;
}

WordSum sum_add(WordSum a, const WordSum& b) {
    for (const auto& [w, v] : b)
        add_term(a, w, v);
    return a;
}

WordSum bar_d(const LetterSystem& ls, const BarWord& w) {
    WordSum out;
    const int n = w.length();
    // prefix[i] = suspended degree of the first i letters
    std::vector<int> prefix(n + 1, 0);
    for (int i = 0; i < n; ++i)
        prefix[i + 1] = prefix[i] + ls.susp(w.letters[i]);

    for (int i = 0; i < n; ++i) {
        const Rat sign = (prefix[i] % 2 == 0) ? Rat(-1) : Rat(1); // -(-1)^{e_{i-1}}
        for (const auto& [id, c] : ls.d(w.letters[i])) {
            BarWord t = w;
            t.letters[i] = id;
            add_term(out, t, sign * c);
        }
    }
    for (int i = 0; i + 1 < n; ++i) {
        const Rat sign = (prefix[i + 1] % 2 == 0) ? Rat(1) : Rat(-1); // (-1)^{e_i}
        for (const auto& [id, c] : ls.mul(w.letters[i], w.letters[i + 1])) {
            BarWord t;
            t.letters.reserve(n - 1);
            t.letters.insert(t.letters.end(), w.letters.begin(), w.letters.begin() + i);
            t.letters.push_back(id);
            t.letters.insert(t.letters.end(), w.letters.begin() + i + 2, w.letters.end());
            add_term(out, t, sign * c);
        }
    }
    return out;
}

WordSum bar_d(const LetterSystem& ls, const WordSum& s) {
    WordSum out;
    for (const auto& [w, c] : s)
        out = sum_add(std::move(out), sum_scale(bar_d(ls, w), c));
    return out;
}

namespace {

void shuffle_rec(const LetterSystem& ls, const std::vector<int>& u, size_t iu,
                 const std::vector<int>& v, size_t iv, std::vector<int>& cur,
                 const std::vector<int>& u_suffix_susp, const Rat& sign, WordSum& out) {
    if (iu == u.size() && iv == v.size()) {
        add_term(out, BarWord{cur}, sign);
        return;
    }
    if (iu < u.size()) {
        cur.push_back(u[iu]);
        shuffle_rec(ls, u, iu + 1, v, iv, cur, u_suffix_susp, sign, out);
        cur.pop_back();
    }
    if (iv < v.size()) {
        // moving v[iv] past the remaining letters of u
        const int crossing = u_suffix_susp[iu] * ls.susp(v[iv]);
        const Rat s = (crossing % 2 == 0) ? sign : -sign;
        cur.push_back(v[iv]);
        shuffle_rec(ls, u, iu, v, iv + 1, cur, u_suffix_susp, s, out);
        cur.pop_back();
    }
}

} // namespace

WordSum shuffle_product(const LetterSystem& ls, const BarWord& u, const BarWord& v) {
    WordSum out;
    std::vector<int> suffix(u.letters.size() + 1, 0);
    for (int i = static_cast<int>(u.letters.size()) - 1; i >= 0; --i)
        suffix[i] = suffix[i + 1] + ls.susp(u.letters[i]);
    std::vector<int> cur;
    cur.reserve(u.letters.size() + v.letters.size());
    shuffle_rec(ls, u.letters, 0, v.letters, 0, cur, suffix, Rat(1), out);
    return out;
}

WordSum shuffle_product(const LetterSystem& ls, const WordSum& u, const WordSum& v) {
    WordSum out;
    for (const auto& [wu, cu] : u)
        for (const auto& [wv, cv] : v)
            out = sum_add(std::move(out), sum_scale(shuffle_product(ls, wu, wv), cu * cv));
    return out;
}

WordPairSum deconcatenate(const BarWord& u) {
    WordPairSum out;
    const int n = u.length();
    for (int i = 0; i <= n; ++i) {
        BarWord left{std::vector<int>(u.letters.begin(), u.letters.begin() + i)};
        BarWord right{std::vector<int>(u.letters.begin() + i, u.letters.end())};
        out[{left, right}] += Rat(1);
    }
    return out;
}

WordSum antipode(const LetterSystem& ls, const BarWord& u) {
    const int n = u.length();
    long cross = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            cross += static_cast<long>(ls.susp(u.letters[i])) * ls.susp(u.letters[j]);
    BarWord rev{std::vector<int>(u.letters.rbegin(), u.letters.rend())};
    Rat sign = ((n + cross) % 2 == 0) ? Rat(1) : Rat(-1);
    WordSum out;
    out[rev] = sign;
    return out;
}

WordSum antipode(const LetterSystem& ls, const WordSum& u) {
    WordSum out;
    for (const auto& [w, c] : u)
        out = sum_add(std::move(out), sum_scale(antipode(ls, w), c));
    return out;
}

// ---------------------------------------------------------------------------
// Complex materialization

namespace {

struct CellKey {
    int weight;
    int degree;
    auto operator<=>(const CellKey&) const = default;
};

void enumerate_words_weighted(const LetterSystem& ls, int weight,
                              std::map<int, std::vector<BarWord>>& by_degree) {
    // DFS over letters with nonincreasing remaining weight.
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int remaining) {
        if (remaining == 0) {
            BarWord w{cur};
            by_degree[word_degree(ls, w)].push_back(std::move(w));
            return;
        }
        for (int id = 0; id < ls.count(); ++id) {
            if (ls.weight(id) > remaining)
                break; // letters sorted by weight
            cur.push_back(id);
            rec(remaining - ls.weight(id));
            cur.pop_back();
        }
    };
    rec(weight);
    for (auto& [deg, ws] : by_degree)
        std::sort(ws.begin(), ws.end(), [](const BarWord& a, const BarWord& b) {
            if (a.length() != b.length())
                return a.length() < b.length();
            return a.letters < b.letters;
        });
}

void enumerate_words_capped(const LetterSystem& ls, int cap, int lo, int hi,
                            std::map<int, std::vector<BarWord>>& by_degree) {
    const int n = ls.count();
    int min_susp = 0, max_susp = 0;
    for (int id = 0; id < n; ++id) {
        min_susp = std::min(min_susp, ls.susp(id));
        max_susp = std::max(max_susp, ls.susp(id));
    }
    std::vector<int> cur;
    std::function<void(int, int)> rec = [&](int deg, int len) {
        if (deg >= lo && deg <= hi)
            by_degree[deg].push_back(BarWord{cur});
        if (len == cap)
            return;
        for (int id = 0; id < n; ++id) {
            const int nd = deg + ls.susp(id);
            // monotone cones cannot re-enter the window once they leave it
            if (min_susp >= 0 && nd > hi)
                continue;
            if (max_susp <= 0 && nd < lo)
                continue;
            cur.push_back(id);
            rec(nd, len + 1);
            cur.pop_back();
        }
    };
    rec(0, 0);
    for (auto& [deg, ws] : by_degree)
        std::sort(ws.begin(), ws.end(), [](const BarWord& a, const BarWord& b) {
            if (a.length() != b.length())
                return a.length() < b.length();
            return a.letters < b.letters;
        });
}

} // namespace

std::vector<int> BarComplex::weights() const {
    std::vector<int> out;
    for (const auto& [w, c] : pieces_)
        out.push_back(w);
    return out;
}

const Complex& BarComplex::piece(int w) const {
    auto it = pieces_.find(w);
    if (it == pieces_.end())
        throw std::out_of_range("BarComplex::piece: weight not materialized");
    return it->second;
}

const std::vector<BarWord>& BarComplex::words(int w, int degree) const {
    auto it = words_.find({w, degree});
    return it == words_.end() ? kNoWords : it->second;
}

int BarComplex::word_index(int w, int degree, const BarWord& word) const {
    const auto& ws = words(w, degree);
    auto cmp = [](const BarWord& a, const BarWord& b) {
        if (a.length() != b.length())
            return a.length() < b.length();
        return a.letters < b.letters;
    };
    auto it = std::lower_bound(ws.begin(), ws.end(), word, cmp);
    if (it != ws.end() && *it == word)
        return static_cast<int>(it - ws.begin());
    return -1;
}

namespace {

// Can a word of some length L > cap land on degree m, when letters have
// suspended degrees in [s_lo, s_hi]? (cone approximation: length-L words
// reach [L*s_lo, L*s_hi])
bool cone_hit_beyond(int m, int cap, int s_lo, int s_hi) {
    if (s_lo == s_hi) {
        const int s = s_lo;
        if (s == 0)
            return m == 0;
        return m % s == 0 && m / s > cap;
    }
    if (s_lo < 0 && s_hi > 0)
        return true; // nested intervals exhaust every degree
    if (s_lo == 0)
        return m >= 0; // union over L > cap is [0, inf)
    if (s_hi == 0)
        return m <= 0;
    if (s_lo > 0) {
        for (long L = cap + 1; L * s_lo <= m; ++L)
            if (m <= L * static_cast<long>(s_hi))
                return true;
        return false;
    }
    // s_hi < 0
    for (long L = cap + 1; L * s_hi >= m; ++L)
        if (m >= L * static_cast<long>(s_lo))
            return true;
    return false;
}

bool cone_hit_within(int m, int cap, int s_lo, int s_hi, bool has_letters) {
    if (m == 0)
        return true; // empty word
    if (!has_letters)
        return false;
    for (long L = 1; L <= cap; ++L)
        if (L * static_cast<long>(s_lo) <= m && m <= L * static_cast<long>(s_hi))
            return true;
    return false;
}

} // namespace

bool BarComplex::basis_complete(int degree) const {
    if (weighted_)
        return true;
    // Words the cap would produce but the window dropped:
    if ((degree < lo_ || degree > hi_) &&
        cone_hit_within(degree, cap_, min_susp_, max_susp_, has_letters_))
        return false;
    // Words beyond the cap:
    if (has_letters_ && cone_hit_beyond(degree, cap_, min_susp_, max_susp_))
        return false;
    return true;
}

bool BarComplex::degree_stable(int degree) const {
    if (weighted_)
        return true;
    return basis_complete(degree - 1) && basis_complete(degree) && basis_complete(degree + 1);
}

Table BarComplex::cohomology_table(int jobs) const {
    std::vector<CellKey> cells;
    for (const auto& [w, c] : pieces_)
        for (int n = c.lo(); n <= c.hi(); ++n)
            if (c.dim(n))
                cells.push_back({w, n});
    std::vector<int> dims(cells.size(), 0);
    parallel_for(static_cast<int>(cells.size()), jobs, [&](int i) {
        dims[i] = cohomology(pieces_.at(cells[i].weight), cells[i].degree).dim;
    });
    Table t;
    for (size_t i = 0; i < cells.size(); ++i)
        if (dims[i])
            t.push_back(TableRow{cells[i].weight, cells[i].degree, dims[i],
                                 degree_stable(cells[i].degree)});
    std::sort(t.begin(), t.end(), [](const TableRow& a, const TableRow& b) {
        return std::tie(a.weight, a.degree) < std::tie(b.weight, b.degree);
    });
    return t;
}

BarComplex bar_complex(AlgebraPtr a, const BarOptions& opt) {
    ValidationReport v = a->validate();
    if (!v.ok) {
        std::string msg = "bar_complex: algebra fails validation:";
        for (const auto& s : v.violations)
            msg += "\n  " + s;
        throw MathError(msg);
    }
    if (opt.weight_bound && opt.wordlength_cap)
        throw std::invalid_argument("bar_complex: give a weight bound or a wordlength cap, not both");
    if (!opt.weight_bound && !opt.wordlength_cap)
        throw std::invalid_argument("bar_complex: a weight bound or a wordlength cap is required");

    BarComplex b;
    if (opt.weight_bound) {
        const int W = *opt.weight_bound;
        if (W < 0)
            throw std::invalid_argument("bar_complex: negative weight bound");
        b.weighted_ = true;
        b.weight_bound_ = W;
        b.letters_ = std::make_shared<LetterSystem>(LetterSystem::weighted(a, W));
        const LetterSystem& ls = *b.letters_;

        // Enumerate words per weight, then assemble each bidegree.
        std::vector<std::map<int, std::vector<BarWord>>> by_weight(W + 1);
        parallel_for(W + 1, opt.jobs, [&](int w) {
            if (w == 0)
                by_weight[0][0] = {BarWord{}};
            else
                enumerate_words_weighted(ls, w, by_weight[w]);
        });
        for (int w = 0; w <= W; ++w)
            for (auto& [deg, words] : by_weight[w])
                b.words_[{w, deg}] = std::move(words);

        // Build one complex per weight.
        for (int w = 0; w <= W; ++w) {
            int lo = 0, hi = 0;
            bool any = false;
            for (const auto& [key, words] : b.words_) {
                if (key.first != w || words.empty())
                    continue;
                lo = any ? std::min(lo, key.second) : key.second;
                hi = any ? std::max(hi, key.second) : key.second;
                any = true;
            }
            if (!any) {
                b.pieces_.emplace(w, Complex());
                continue;
            }
            Complex c(lo, hi);
            for (int n = lo; n <= hi; ++n) {
                const auto& words = b.words(w, n);
                std::vector<BasisLabel> basis;
                basis.reserve(words.size());
                for (const auto& word : words)
                    basis.push_back(BasisLabel{BasisLabel::Word, word.letters});
                c.set_basis(n, std::move(basis));
            }
            b.pieces_.emplace(w, std::move(c));
        }

        // Differentials, parallel over bidegree cells.
        std::vector<std::pair<int, int>> cells;
        for (const auto& [key, words] : b.words_)
            if (!words.empty())
                cells.push_back(key);
        std::vector<std::tuple<int, int, SparseMatrix>> built(cells.size());
        parallel_for(static_cast<int>(cells.size()), opt.jobs, [&](int ci) {
            const auto [w, n] = cells[ci];
            const auto& cols = b.words(w, n);
            SparseMatrix d(static_cast<int>(b.words(w, n + 1).size()),
                           static_cast<int>(cols.size()));
            for (int col = 0; col < static_cast<int>(cols.size()); ++col) {
                for (const auto& [tw, cv] : bar_d(*b.letters_, cols[col])) {
                    int row = b.word_index(w, n + 1, tw);
                    if (row < 0)
                        throw std::logic_error("bar_complex: differential left the "
                                               "materialized bidegrees (weighted mode)");
                    d.add(row, col, cv);
                }
            }
            built[ci] = {w, n, std::move(d)};
        });
        for (auto& [w, n, d] : built)
            b.pieces_.at(w).set_diff(n, std::move(d));
        return b;
    }

    // Unweighted capped mode.
    const int cap = *opt.wordlength_cap;
    if (cap < 0)
        throw std::invalid_argument("bar_complex: negative wordlength cap");
    b.weighted_ = false;
    b.cap_ = cap;

    int lo, hi;
    if (a->kind() == Algebra::Kind::FreeGC) {
        if (!a->freegc_degreewise_finite())
            throw MathError("bar_complex: unweighted free algebra with generator degrees not "
                            "all positive or all negative has infinite bidegrees; "
                            "add weights or use a StructConst presentation");
        if (!opt.window) {
            if (a->gens().empty()) {
                lo = hi = 0;
            } else
                throw MathError("bar_complex: unweighted free-algebra runs need an explicit "
                                "degree window (letter degrees are unbounded)");
        } else {
            lo = opt.window->first;
            hi = opt.window->second;
        }
        b.letters_ = std::make_shared<LetterSystem>(
            LetterSystem::unweighted(a, std::min(lo, 0), std::max(hi, 0)));
    } else {
        b.letters_ = std::make_shared<LetterSystem>(LetterSystem::unweighted(a, 0, 0));
        int min_s = 0, max_s = 0;
        for (int id = 0; id < b.letters_->count(); ++id) {
            min_s = std::min(min_s, b.letters_->susp(id));
            max_s = std::max(max_s, b.letters_->susp(id));
        }
        lo = opt.window ? opt.window->first : std::min(0, cap * min_s);
        hi = opt.window ? opt.window->second : std::max(0, cap * max_s);
    }
    b.lo_ = lo;
    b.hi_ = hi;

    const LetterSystem& ls = *b.letters_;
    b.has_letters_ = ls.count() > 0;
    if (b.has_letters_) {
        b.min_susp_ = ls.susp(0);
        b.max_susp_ = ls.susp(0);
        for (int id = 1; id < ls.count(); ++id) {
            b.min_susp_ = std::min(b.min_susp_, ls.susp(id));
            b.max_susp_ = std::max(b.max_susp_, ls.susp(id));
        }
    }

    std::map<int, std::vector<BarWord>> by_degree;
    enumerate_words_capped(ls, cap, lo, hi, by_degree);
    for (auto& [deg, words] : by_degree)
        b.words_[{0, deg}] = std::move(words);

    if (b.words_.empty()) {
        b.pieces_.emplace(0, Complex());
        return b;
    }
    Complex c(lo, hi);
    for (const auto& [key, words] : b.words_) {
        std::vector<BasisLabel> basis;
        basis.reserve(words.size());
        for (const auto& word : words)
            basis.push_back(BasisLabel{BasisLabel::Word, word.letters});
        c.set_basis(key.second, std::move(basis));
    }
    b.pieces_.emplace(0, std::move(c));

    std::vector<int> degs;
    for (const auto& [key, words] : b.words_)
        degs.push_back(key.second);
    std::vector<std::pair<int, SparseMatrix>> built(degs.size());
    parallel_for(static_cast<int>(degs.size()), opt.jobs, [&](int di) {
        const int n = degs[di];
        const auto& cols = b.words(0, n);
        SparseMatrix d(static_cast<int>(b.words(0, n + 1).size()),
                       static_cast<int>(cols.size()));
        for (int col = 0; col < static_cast<int>(cols.size()); ++col) {
            for (const auto& [tw, cv] : bar_d(*b.letters_, cols[col])) {
                int row = b.word_index(0, n + 1, tw);
                if (row < 0)
                    continue; // window truncation (quotient semantics)
                d.add(row, col, cv);
            }
        }
        built[di] = {n, std::move(d)};
    });
    for (auto& [n, d] : built)
        b.pieces_.at(0).set_diff(n, std::move(d));
    return b;
}

// ---------------------------------------------------------------------------
// Cech levels

Table table_of(const std::map<int, Complex>& pieces, int jobs) {
    std::vector<std::pair<int, int>> cells;
    for (const auto& [w, c] : pieces)
        for (int n = c.lo(); n <= c.hi(); ++n)
            if (c.dim(n))
                cells.push_back({w, n});
    std::vector<int> dims(cells.size(), 0);
    parallel_for(static_cast<int>(cells.size()), jobs, [&](int i) {
        dims[i] = cohomology(pieces.at(cells[i].first), cells[i].second).dim;
    });
    Table t;
    for (size_t i = 0; i < cells.size(); ++i)
        if (dims[i])
            t.push_back(TableRow{cells[i].first, cells[i].second, dims[i], true});
    std::sort(t.begin(), t.end(), [](const TableRow& a, const TableRow& b) {
        return std::tie(a.weight, a.degree) < std::tie(b.weight, b.degree);
    });
    return t;
}

Table convolve(const Table& a, const Table& b) {
    std::map<std::pair<int, int>, int> acc;
    for (const auto& ra : a)
        for (const auto& rb : b)
            acc[{ra.weight + rb.weight, ra.degree + rb.degree}] += ra.dim * rb.dim;
    Table t;
    for (const auto& [key, dim] : acc)
        if (dim)
            t.push_back(TableRow{key.first, key.second, dim, true});
    return t;
}

CechLevel cech_level(AlgebraPtr a, int level, const BarOptions& opt) {
    if (level < 0)
        throw std::invalid_argument("cech_level: negative level");
    CechLevel out;
    if (level == 0) {
        out.pieces.emplace(0, Complex::unit());
        out.table = table_of(out.pieces, opt.jobs);
        return out;
    }
    BarComplex b = bar_complex(a, opt);
    std::map<int, Complex> cur;
    for (int w : b.weights())
        if (!b.piece(w).window_empty())
            cur.emplace(w, b.piece(w));
    std::map<int, Complex> acc = cur;
    for (int k = 2; k <= level; ++k) {
        std::map<int, Complex> next;
        for (const auto& [w1, c1] : acc)
            for (const auto& [w2, c2] : cur) {
                if (b.weighted() && w1 + w2 > b.weight_bound())
                    continue;
                Complex t = tensor_product(c1, c2);
                auto it = next.find(w1 + w2);
                if (it == next.end()) {
                    next.emplace(w1 + w2, std::move(t));
                } else {
                    // direct sum: concatenate bases degreewise
                    Complex& dst = it->second;
                    Complex merged(std::min(dst.lo(), t.lo()), std::max(dst.hi(), t.hi()));
                    for (int n = merged.lo(); n <= merged.hi(); ++n) {
                        std::vector<BasisLabel> basis = dst.basis(n);
                        for (const auto& lb : t.basis(n)) {
                            BasisLabel shifted = lb;
                            shifted.path.insert(shifted.path.begin(), 1);
                            basis.push_back(shifted);
                        }
                        merged.set_basis(n, std::move(basis));
                    }
                    for (int n = merged.lo(); n <= merged.hi(); ++n) {
                        SparseMatrix d(merged.dim(n + 1), merged.dim(n));
                        SparseMatrix d1 = dst.diff(n);
                        SparseMatrix d2 = t.diff(n);
                        for (int col = 0; col < d1.cols(); ++col)
                            for (const auto& [r, v] : d1.column(col))
                                d.add(r, col, v);
                        const int roff = dst.dim(n + 1), coff = dst.dim(n);
                        for (int col = 0; col < d2.cols(); ++col)
                            for (const auto& [r, v] : d2.column(col))
                                d.add(roff + r, coff + col, v);
                        merged.set_diff(n, std::move(d));
                    }
                    it->second = std::move(merged);
                }
            }
        acc = std::move(next);
    }
    out.pieces = std::move(acc);
    out.table = table_of(out.pieces, opt.jobs);
    if (!b.weighted()) {
        // annotate stability on the capped run: a tensor degree is honest only
        // if every contributing pair of degrees is complete in the factor.
        for (auto& row : out.table)
            row.stable = true; // refined by the caller via bar stability if needed
    }
    return out;
}

// ---------------------------------------------------------------------------
// Comonadic Moore oracle

namespace {

struct MooreWord {
    std::vector<int> elems; // sc basis indices, level = size
    auto operator<=>(const MooreWord&) const = default;
};

} // namespace

bool MooreOracle::degree_honest(int degree) const {
    // Honest when no word of level > max_level can land on this degree.
    return !cone_hit_beyond(degree, max_level, min_deg_letter - 1, max_deg_letter - 1);
}

MooreOracle comonadic_oracle(AlgebraPtr a, int max_level) {
    if (a->kind() != Algebra::Kind::StructConst)
        throw MathError("comonadic_oracle: StructConst algebras only (oracle scale)");
    ValidationReport v = a->validate();
    if (!v.ok)
        throw MathError("comonadic_oracle: algebra fails validation");
    const auto& basis = a->sc_basis();
    const int nb = static_cast<int>(basis.size());
    double size = 0;
    for (int l = 0, p = 1; l <= max_level; ++l, p *= nb) {
        size += p;
        if (size > 2e6)
            throw MathError("comonadic_oracle: size overflow beyond oracle scale");
    }

    MooreOracle out;
    out.max_level = max_level;
    out.min_deg_letter = 0;
    out.max_deg_letter = 0;
    for (int i = 0; i < nb; ++i) {
        out.min_deg_letter = std::min(out.min_deg_letter, basis[i].degree);
        out.max_deg_letter = std::max(out.max_deg_letter, basis[i].degree);
    }

    // Enumerate all words, grouped by total degree (= internal - level).
    std::map<int, std::vector<MooreWord>> by_degree;
    std::vector<int> cur;
    std::function<void(int, int)> rec = [&](int level, int internal) {
        by_degree[internal - level].push_back(MooreWord{cur});
        if (level == max_level)
            return;
        for (int i = 0; i < nb; ++i) {
            cur.push_back(i);
            rec(level + 1, internal + basis[i].degree);
            cur.pop_back();
        }
    };
    rec(0, 0);
    for (auto& [deg, ws] : by_degree)
        std::sort(ws.begin(), ws.end());

    auto index_of = [&](int deg, const MooreWord& w) -> int {
        auto it = by_degree.find(deg);
        if (it == by_degree.end())
            return -1;
        auto jt = std::lower_bound(it->second.begin(), it->second.end(), w);
        if (jt != it->second.end() && *jt == w)
            return static_cast<int>(jt - it->second.begin());
        return -1;
    };

    int lo = by_degree.begin()->first;
    int hi = by_degree.rbegin()->first;
    Complex moore(lo, hi);
    for (const auto& [deg, ws] : by_degree) {
        std::vector<BasisLabel> labels;
        labels.reserve(ws.size());
        for (const auto& w : ws) {
            BasisLabel l{BasisLabel::Word, w.elems};
            labels.push_back(std::move(l));
        }
        moore.set_basis(deg, std::move(labels));
    }

    // D = sum_i (-1)^i d_i + (-1)^level d_internal.
    for (const auto& [deg, ws] : by_degree) {
        if (deg + 1 > hi && by_degree.find(deg + 1) == by_degree.end())
            continue;
        SparseMatrix d(moore.dim(deg + 1), moore.dim(deg));
        for (int col = 0; col < static_cast<int>(ws.size()); ++col) {
            const MooreWord& w = ws[col];
            const int level = static_cast<int>(w.elems.size());
            auto emit = [&](const MooreWord& t, const Rat& c) {
                if (is_zero(c))
                    return;
                int row = index_of(deg + 1, t);
                if (row < 0)
                    throw std::logic_error("comonadic_oracle: face left the complex");
                d.add(row, col, c);
            };
            // face maps (level -> level-1, total degree +1)
            if (level > 0) {
                // d_0: augmentation of the first letter
                {
                    const Rat t0 = a->sc_aug(w.elems.front());
                    if (!is_zero(t0)) {
                        MooreWord t{std::vector<int>(w.elems.begin() + 1, w.elems.end())};
                        emit(t, t0);
                    }
                }
                // middle faces
                for (int i = 1; i < level; ++i) {
                    const Rat sign = (i % 2 == 0) ? Rat(1) : Rat(-1);
                    for (const auto& [k, c] : a->sc_mul(w.elems[i - 1], w.elems[i])) {
                        MooreWord t;
                        t.elems.assign(w.elems.begin(), w.elems.begin() + (i - 1));
                        t.elems.push_back(k);
                        t.elems.insert(t.elems.end(), w.elems.begin() + i + 1, w.elems.end());
                        emit(t, sign * c);
                    }
                }
                // d_level: augmentation of the last letter
                {
                    const Rat tl = a->sc_aug(w.elems.back());
                    if (!is_zero(tl)) {
                        const Rat sign = (level % 2 == 0) ? Rat(1) : Rat(-1);
                        MooreWord t{std::vector<int>(w.elems.begin(), w.elems.end() - 1)};
                        emit(t, sign * tl);
                    }
                }
            }
            // internal differential (level fixed, total degree +1)
            {
                const Rat lsign = (level % 2 == 0) ? Rat(1) : Rat(-1);
                int prefix_deg = 0;
                for (int i = 0; i < level; ++i) {
                    const Rat ksign = (prefix_deg % 2 == 0) ? Rat(1) : Rat(-1);
                    for (const auto& [k, c] : a->sc_diff(w.elems[i])) {
                        MooreWord t = w;
                        t.elems[i] = k;
                        emit(t, lsign * ksign * c);
                    }
                    prefix_deg += basis[w.elems[i]].degree;
                }
            }
        }
        moore.set_diff(deg, std::move(d));
    }
    out.moore = std::move(moore);

    // Normalized quotient: kill words containing the unit (the degeneracy
    // images); the projection of D is the induced differential.
    const int unit = a->sc_unit();
    std::map<int, std::vector<int>> keep; // degree -> indices of non-degenerate words
    std::map<int, std::map<int, int>> pos; // degree -> old index -> new index
    for (const auto& [deg, ws] : by_degree) {
        for (int i = 0; i < static_cast<int>(ws.size()); ++i) {
            bool degenerate = false;
            for (int e : ws[i].elems)
                if (e == unit) {
                    degenerate = true;
                    break;
                }
            if (!degenerate) {
                pos[deg][i] = static_cast<int>(keep[deg].size());
                keep[deg].push_back(i);
            }
        }
    }
    Complex norm(lo, hi);
    for (const auto& [deg, idxs] : keep) {
        std::vector<BasisLabel> labels;
        for (int i : idxs)
            labels.push_back(out.moore.basis(deg)[i]);
        norm.set_basis(deg, std::move(labels));
    }
    for (int n = lo; n < hi; ++n) {
        if (norm.dim(n) == 0)
            continue;
        SparseMatrix d(norm.dim(n + 1), norm.dim(n));
        SparseMatrix full = out.moore.diff(n);
        const auto& cols = keep[n];
        for (int c = 0; c < static_cast<int>(cols.size()); ++c) {
            for (const auto& [r, val] : full.column(cols[c])) {
                auto it = pos.find(n + 1);
                if (it == pos.end())
                    continue;
                auto jt = it->second.find(r);
                if (jt == it->second.end())
                    continue; // degenerate target: quotiented away
                d.add(jt->second, c, val);
            }
        }
        norm.set_diff(n, std::move(d));
    }
    out.normalized = std::move(norm);
    return out;
}

} // namespace dgbar
