#include "dgbar/textio.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace dgbar {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == '#')
            break;
        if (std::isspace(static_cast<unsigned char>(ch))) {
            if (!cur.empty()) {
                out.push_back(cur);
                cur.clear();
            }
        } else {
            cur.push_back(ch);
        }
    }
    if (!cur.empty())
        out.push_back(cur);
    return out;
}

bool valid_name(const std::string& s) {
    if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0])))
        return false;
    for (char ch : s)
        if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_')
            return false;
    return true;
}

int parse_int(const std::string& s, int line, const std::string& what) {
    try {
        size_t used = 0;
        int v = std::stoi(s, &used);
        if (used != s.size())
            throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw ParseError(line, "expected an integer for " + what + ", got '" + s + "'");
    }
}

// Linear/polynomial expressions: terms joined by + or -, each term a product
// of an optional rational coefficient and name factors (name or name^k),
// joined by '*'. "0" denotes the zero expression.
struct Term {
    Rat coeff;
    std::vector<std::pair<std::string, int>> factors;
};

std::vector<Term> parse_expr(const std::vector<std::string>& toks, size_t from, int line) {
    // Re-join and split on +/- while keeping them as separators; the
    // tokenizer already split on whitespace, so glue back first.
    std::string expr;
    for (size_t i = from; i < toks.size(); ++i)
        expr += toks[i];
    if (expr.empty())
        throw ParseError(line, "empty expression");
    std::vector<Term> terms;
    size_t i = 0;
    const size_t n = expr.size();
    while (i < n) {
        Rat sign(1);
        while (i < n && (expr[i] == '+' || expr[i] == '-')) {
            if (expr[i] == '-')
                sign = -sign;
            ++i;
        }
        if (i >= n)
            throw ParseError(line, "dangling sign in expression");
        size_t start = i;
        while (i < n && expr[i] != '+' && expr[i] != '-')
            ++i;
        std::string chunk = expr.substr(start, i - start);
        // split on '*'
        Term t;
        t.coeff = sign;
        size_t p = 0;
        bool any = false;
        while (p < chunk.size()) {
            size_t q = chunk.find('*', p);
            std::string piece = chunk.substr(p, q == std::string::npos ? q : q - p);
            p = (q == std::string::npos) ? chunk.size() : q + 1;
            if (piece.empty())
                throw ParseError(line, "empty factor in expression");
            if (std::isdigit(static_cast<unsigned char>(piece[0]))) {
                t.coeff *= rat_parse(piece);
            } else {
                size_t caret = piece.find('^');
                std::string nm = piece.substr(0, caret);
                int e = 1;
                if (caret != std::string::npos)
                    e = parse_int(piece.substr(caret + 1), line, "exponent");
                if (!valid_name(nm))
                    throw ParseError(line, "bad name '" + nm + "' in expression");
                if (e < 0)
                    throw ParseError(line, "negative exponent");
                if (e > 0)
                    t.factors.emplace_back(nm, e);
            }
            any = true;
        }
        if (!any)
            throw ParseError(line, "empty term");
        terms.push_back(std::move(t));
    }
    // "0" parses as a single term with coefficient 0 and no factors
    return terms;
}

} // namespace

AlgebraPtr parse_algebra(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;

    std::string name;
    std::optional<Algebra::Kind> kind;
    bool mixed_tate = false;

    struct RawElem {
        std::string name;
        int degree = 0;
        int weight = 0;
        bool has_weight = false;
        int line = 0;
    };
    std::vector<RawElem> elems; // gens or basis
    std::string unit_name;
    struct RawExpr {
        std::vector<Term> terms;
        int line;
    };
    std::map<std::string, RawExpr> diffs, augs;
    std::map<std::pair<std::string, std::string>, RawExpr> muls;
    bool saw_any = false;

    while (std::getline(in, line)) {
        ++lineno;
        auto toks = tokenize(line);
        if (toks.empty())
            continue;
        saw_any = true;
        const std::string& head = toks[0];
        if (head == "algebra") {
            if (toks.size() != 2 || !valid_name(toks[1]))
                throw ParseError(lineno, "usage: algebra <name>");
            name = toks[1];
        } else if (head == "kind") {
            if (toks.size() != 2)
                throw ParseError(lineno, "usage: kind freegc|structconst");
            if (toks[1] == "freegc")
                kind = Algebra::Kind::FreeGC;
            else if (toks[1] == "structconst")
                kind = Algebra::Kind::StructConst;
            else
                throw ParseError(lineno, "unknown kind '" + toks[1] + "'");
        } else if (head == "mixed-tate") {
            if (toks.size() != 1)
                throw ParseError(lineno, "mixed-tate takes no arguments");
            mixed_tate = true;
        } else if (head == "gen" || head == "basis") {
            // gen <name> deg <int> [wt <int>]
            if (toks.size() != 4 && toks.size() != 6)
                throw ParseError(lineno, "usage: " + head + " <name> deg <int> [wt <int>]");
            if (!valid_name(toks[1]))
                throw ParseError(lineno, "bad generator name '" + toks[1] + "'");
            if (toks[2] != "deg")
                throw ParseError(lineno, "expected 'deg'");
            RawElem e;
            e.name = toks[1];
            e.degree = parse_int(toks[3], lineno, "degree");
            e.line = lineno;
            if (toks.size() == 6) {
                if (toks[4] != "wt")
                    throw ParseError(lineno, "expected 'wt'");
                e.weight = parse_int(toks[5], lineno, "weight");
                e.has_weight = true;
            }
            elems.push_back(std::move(e));
        } else if (head == "unit") {
            if (toks.size() != 2)
                throw ParseError(lineno, "usage: unit <name>");
            unit_name = toks[1];
        } else if (head == "d") {
            if (toks.size() < 4 || toks[2] != "=")
                throw ParseError(lineno, "usage: d <name> = <expr>");
            diffs[toks[1]] = RawExpr{parse_expr(toks, 3, lineno), lineno};
        } else if (head == "aug") {
            if (toks.size() != 4 || toks[2] != "=")
                throw ParseError(lineno, "usage: aug <name> = <rational>");
            try {
                RawExpr e;
                e.terms = {Term{rat_parse(toks[3]), {}}};
                e.line = lineno;
                augs[toks[1]] = std::move(e);
            } catch (const std::invalid_argument& ex) {
                throw ParseError(lineno, ex.what());
            }
        } else if (head == "mul") {
            if (toks.size() < 5 || toks[3] != "=")
                throw ParseError(lineno, "usage: mul <a> <b> = <expr>");
            muls[{toks[1], toks[2]}] = RawExpr{parse_expr(toks, 4, lineno), lineno};
        } else {
            throw ParseError(lineno, "unknown directive '" + head + "'");
        }
    }
    if (!saw_any)
        throw ParseError(1, "empty algebra description");
    if (name.empty())
        throw ParseError(1, "missing 'algebra <name>' header");
    if (!kind)
        throw ParseError(1, "missing 'kind freegc|structconst'");
    if (mixed_tate)
        for (const auto& e : elems)
            if (!e.has_weight && e.name != unit_name)
                throw ParseError(e.line, "mixed-tate inputs need an explicit 'wt' on every "
                                         "generator ('" + e.name + "' has none)");

    auto elem_index = [&](const std::string& nm) -> int {
        for (size_t i = 0; i < elems.size(); ++i)
            if (elems[i].name == nm)
                return static_cast<int>(i);
        return -1;
    };

    if (*kind == Algebra::Kind::FreeGC) {
        if (!unit_name.empty())
            throw ParseError(1, "'unit' is only meaningful for structconst algebras");
        if (!muls.empty())
            throw ParseError(muls.begin()->second.line, "'mul' lines require kind structconst");
        std::vector<Generator> gens;
        for (const auto& e : elems)
            gens.push_back(Generator{e.name, e.degree, e.weight});
        // convert expressions to FreeElems over sorted generator indices
        Algebra probe = Algebra::free_gc(name, gens, {}, {}, mixed_tate);
        auto to_poly = [&](const RawExpr& raw) {
            FreeElem out;
            for (const Term& t : raw.terms) {
                Monomial m;
                std::map<int, int> exp;
                for (const auto& [nm, e] : t.factors) {
                    int gi = probe.gen_index(nm);
                    if (gi < 0)
                        throw ParseError(raw.line, "unknown generator '" + nm + "'");
                    exp[gi] += e;
                }
                Rat coeff = t.coeff;
                bool zero = false;
                for (const auto& [gi, e] : exp) {
                    if (probe.gens()[gi].degree % 2 != 0 && e > 1) {
                        zero = true; // odd square
                        break;
                    }
                    m.factors.emplace_back(gi, e);
                }
                if (zero || is_zero(coeff))
                    continue;
                auto [it, fresh] = out.try_emplace(m, coeff);
                if (!fresh) {
                    it->second += coeff;
                    if (is_zero(it->second))
                        out.erase(it);
                }
            }
            return out;
        };
        std::map<std::string, FreeElem> diff_by_name;
        std::map<std::string, Rat> aug_by_name;
        for (const auto& [nm, raw] : diffs) {
            if (probe.gen_index(nm) < 0)
                throw ParseError(raw.line, "d of unknown generator '" + nm + "'");
            diff_by_name[nm] = to_poly(raw);
        }
        for (const auto& [nm, raw] : augs) {
            if (probe.gen_index(nm) < 0)
                throw ParseError(raw.line, "aug of unknown generator '" + nm + "'");
            aug_by_name[nm] = raw.terms[0].coeff;
        }
        return std::make_shared<Algebra>(
            Algebra::free_gc(name, gens, diff_by_name, aug_by_name, mixed_tate));
    }

    // StructConst
    if (unit_name.empty())
        throw ParseError(1, "structconst algebras need a 'unit <name>' line");
    int unit = elem_index(unit_name);
    if (unit < 0)
        throw ParseError(1, "unit '" + unit_name + "' is not a basis element");
    std::vector<Algebra::SCElem> basis;
    for (const auto& e : elems)
        basis.push_back(Algebra::SCElem{e.name, e.degree, e.weight});

    auto to_vec = [&](const RawExpr& raw) {
        std::vector<std::pair<int, Rat>> terms;
        for (const Term& t : raw.terms) {
            if (t.factors.empty()) {
                if (!is_zero(t.coeff))
                    terms.emplace_back(unit, t.coeff);
                continue;
            }
            if (t.factors.size() != 1 || t.factors[0].second != 1)
                throw ParseError(raw.line,
                                 "structconst expressions must be linear in basis names");
            int bi = elem_index(t.factors[0].first);
            if (bi < 0)
                throw ParseError(raw.line, "unknown basis element '" + t.factors[0].first + "'");
            terms.emplace_back(bi, t.coeff);
        }
        return sv_normalize(std::move(terms));
    };
    std::map<std::pair<int, int>, SparseVec> mul;
    for (const auto& [key, raw] : muls) {
        int i = elem_index(key.first), j = elem_index(key.second);
        if (i < 0 || j < 0)
            throw ParseError(raw.line, "mul of unknown basis element");
        mul[{i, j}] = to_vec(raw);
    }
    std::map<int, SparseVec> diff;
    for (const auto& [nm, raw] : diffs) {
        int i = elem_index(nm);
        if (i < 0)
            throw ParseError(raw.line, "d of unknown basis element '" + nm + "'");
        diff[i] = to_vec(raw);
    }
    std::vector<Rat> aug(basis.size(), Rat(0));
    for (const auto& [nm, raw] : augs) {
        int i = elem_index(nm);
        if (i < 0)
            throw ParseError(raw.line, "aug of unknown basis element '" + nm + "'");
        aug[i] = raw.terms[0].coeff;
    }
    return std::make_shared<Algebra>(
        Algebra::struct_const(name, basis, unit, mul, diff, aug, mixed_tate));
}

std::string serialize_algebra(const Algebra& a) {
    std::ostringstream os;
    os << "algebra " << a.name() << "\n";
    os << "kind " << (a.kind() == Algebra::Kind::FreeGC ? "freegc" : "structconst") << "\n";
    if (a.mixed_tate())
        os << "mixed-tate\n";
    if (a.kind() == Algebra::Kind::FreeGC) {
        for (const auto& g : a.gens())
            os << "gen " << g.name << " deg " << g.degree << " wt " << g.weight << "\n";
        for (size_t i = 0; i < a.gens().size(); ++i) {
            FreeElem d = a.gen_diff_presented(static_cast<int>(i));
            if (!d.empty())
                os << "d " << a.gens()[i].name << " = " << a.poly_str(d) << "\n";
        }
        for (size_t i = 0; i < a.gens().size(); ++i)
            if (!is_zero(a.gen_aug(static_cast<int>(i))))
                os << "aug " << a.gens()[i].name << " = "
                   << rat_str(a.gen_aug(static_cast<int>(i))) << "\n";
    } else {
        for (const auto& e : a.sc_basis())
            os << "basis " << e.name << " deg " << e.degree << " wt " << e.weight << "\n";
        os << "unit " << a.sc_basis()[a.sc_unit()].name << "\n";
        const int n = static_cast<int>(a.sc_basis().size());
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == a.sc_unit() || j == a.sc_unit())
                    continue; // implied
                os << "mul " << a.sc_basis()[i].name << " " << a.sc_basis()[j].name << " = "
                   << a.vec_str(a.sc_mul(i, j)) << "\n";
            }
        for (int i = 0; i < n; ++i)
            if (!a.sc_diff(i).empty())
                os << "d " << a.sc_basis()[i].name << " = " << a.vec_str(a.sc_diff(i)) << "\n";
        for (int i = 0; i < n; ++i)
            if (i != a.sc_unit() && !is_zero(a.sc_aug(i)))
                os << "aug " << a.sc_basis()[i].name << " = " << rat_str(a.sc_aug(i)) << "\n";
    }
    return os.str();
}

std::string serialize_table(const Table& t, bool annotate_stability) {
    std::ostringstream os;
    for (const auto& r : t) {
        os << r.weight << " " << r.degree << " " << r.dim;
        if (annotate_stability)
            os << " " << (r.stable ? "stable" : "unstable");
        os << "\n";
    }
    return os.str();
}

std::string serialize_complex(const Complex& c) {
    std::ostringstream os;
    for (int n = c.lo(); n <= c.hi(); ++n)
        if (c.dim(n))
            os << "deg " << n << " dim " << c.dim(n) << "\n";
    for (int n = c.lo(); n <= c.hi(); ++n) {
        SparseMatrix d = c.diff(n);
        for (int r = 0; r < d.rows(); ++r)
            for (const auto& [col, v] : d.row(r))
                os << "d " << n << " " << r << " " << col << " " << rat_str(v) << "\n";
    }
    return os.str();
}

std::string serialize_validation(const ValidationReport& rep) {
    std::ostringstream os;
    os << (rep.ok ? "VALID" : "INVALID") << "\n";
    for (const auto& s : rep.violations)
        os << "violation: " << s << "\n";
    return os.str();
}

std::string serialize_connectivity(const ConnectivityReport& rep) {
    std::ostringstream os;
    os << (rep.pass ? "PASS" : "FAIL") << " connectivity (weights 0.." << rep.weight_bound
       << ")\n";
    for (const auto& r : rep.table)
        os << r.weight << " " << r.degree << " " << r.dim << "\n";
    for (const auto& w : rep.witnesses)
        os << "witness: " << w << "\n";
    return os.str();
}

std::string serialize_hopf(const HopfAlgebra& h) {
    std::ostringstream os;
    os << "hopf " << h.name << "\n";
    if (h.truncated)
        os << "truncated " << h.weight_bound << "\n";
    else
        os << "complete\n";
    for (int i = 0; i < h.dim(); ++i)
        os << "basis " << i << " wt " << h.basis[i].weight << " " << h.basis[i].label << "\n";
    os << "unit " << h.unit << "\n";
    for (int i = 0; i < h.dim(); ++i)
        if (!is_zero(h.counit[i]))
            os << "counit " << i << " = " << rat_str(h.counit[i]) << "\n";
    auto vec_str = [](const SparseVec& v) {
        if (v.empty())
            return std::string("0");
        std::ostringstream vs;
        bool first = true;
        for (const auto& [k, c] : v) {
            if (!first)
                vs << " + ";
            vs << rat_str(c) << "*b" << k;
            first = false;
        }
        return vs.str();
    };
    for (const auto& [key, v] : h.mul)
        os << "mul " << key.first << " " << key.second << " = " << vec_str(v) << "\n";
    for (const auto& [i, terms] : h.comul) {
        os << "comul " << i << " =";
        auto sorted = terms;
        std::sort(sorted.begin(), sorted.end(), [](const auto& x, const auto& y) {
            return std::tie(std::get<0>(x), std::get<1>(x)) <
                   std::tie(std::get<0>(y), std::get<1>(y));
        });
        if (sorted.empty())
            os << " 0";
        for (const auto& [a, b, c] : sorted)
            os << " " << rat_str(c) << "*(b" << a << ",b" << b << ")";
        os << "\n";
    }
    for (const auto& [i, v] : h.antipode)
        os << "antipode " << i << " = " << vec_str(v) << "\n";
    return os.str();
}

std::string serialize_hopf_report(const HopfReport& rep) {
    std::ostringstream os;
    os << (rep.ok ? "HOPF-VALID" : "HOPF-INVALID") << " (" << rep.identities_checked
       << " identities checked)\n";
    for (const auto& s : rep.violations)
        os << "violation: " << s << "\n";
    return os.str();
}

} // namespace dgbar
