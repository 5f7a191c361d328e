#include "dgbar/weighted.hpp"

#include "dgbar/parallel.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace dgbar {

GradedComplex GradedComplex::unit() {
    GradedComplex g;
    g.pieces.emplace(0, Complex::unit());
    return g;
}

int GradedComplex::dim(int weight, int degree) const {
    auto it = pieces.find(weight);
    return it == pieces.end() ? 0 : it->second.dim(degree);
}

namespace {

// Degreewise direct sum, used to accumulate weight pieces.
Complex direct_sum(const Complex& a, const Complex& b) {
    if (a.window_empty())
        return b;
    if (b.window_empty())
        return a;
    Complex out(std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
    for (int n = out.lo(); n <= out.hi(); ++n) {
        std::vector<BasisLabel> basis = a.basis(n);
        for (BasisLabel l : b.basis(n)) {
            l.path.insert(l.path.begin(), 1); // disambiguate summand
            basis.push_back(std::move(l));
        }
        out.set_basis(n, std::move(basis));
    }
    for (int n = out.lo(); n <= out.hi(); ++n) {
        SparseMatrix d(out.dim(n + 1), out.dim(n));
        SparseMatrix da = a.diff(n);
        for (int c = 0; c < da.cols(); ++c)
            for (const auto& [r, v] : da.column(c))
                d.add(r, c, v);
        SparseMatrix db = b.diff(n);
        const int roff = a.dim(n + 1), coff = a.dim(n);
        for (int c = 0; c < db.cols(); ++c)
            for (const auto& [r, v] : db.column(c))
                d.add(roff + r, coff + c, v);
        out.set_diff(n, std::move(d));
    }
    return out;
}

} // namespace

GradedComplex graded_tensor(const GradedComplex& a, const GradedComplex& b) {
    GradedComplex out;
    for (const auto& [wa, ca] : a.pieces)
        for (const auto& [wb, cb] : b.pieces) {
            if (ca.window_empty() || cb.window_empty())
                continue;
            Complex t = tensor_product(ca, cb);
            auto it = out.pieces.find(wa + wb);
            if (it == out.pieces.end())
                out.pieces.emplace(wa + wb, std::move(t));
            else
                it->second = direct_sum(it->second, t);
        }
    return out;
}

Table graded_table(const GradedComplex& g, int jobs) { return table_of(g.pieces, jobs); }

GradedComplex algebra_graded_complex(AlgebraPtr a, int weight_bound) {
    GradedComplex out;
    out.pieces.emplace(0, Complex::unit());
    if (weight_bound < 1)
        return out;
    LetterSystem ls = LetterSystem::weighted(a, weight_bound);
    for (int w = 1; w <= weight_bound; ++w) {
        std::map<int, std::vector<int>> by_degree; // degree -> letter ids
        for (int id = 0; id < ls.count(); ++id)
            if (ls.weight(id) == w)
                by_degree[ls.degree(id)].push_back(id);
        if (by_degree.empty()) {
            out.pieces.emplace(w, Complex());
            continue;
        }
        const int lo = by_degree.begin()->first;
        const int hi = by_degree.rbegin()->first;
        Complex c(lo, hi);
        std::map<int, std::map<int, int>> pos; // degree -> letter id -> index
        for (const auto& [deg, ids] : by_degree) {
            std::vector<BasisLabel> basis;
            for (int i = 0; i < static_cast<int>(ids.size()); ++i) {
                pos[deg][ids[i]] = i;
                basis.push_back(BasisLabel{BasisLabel::Mono, {ids[i]}});
            }
            c.set_basis(deg, std::move(basis));
        }
        for (const auto& [deg, ids] : by_degree) {
            SparseMatrix d(c.dim(deg + 1), c.dim(deg));
            for (int col = 0; col < static_cast<int>(ids.size()); ++col)
                for (const auto& [tid, v] : ls.d(ids[col])) {
                    auto it = pos.find(deg + 1);
                    if (it == pos.end())
                        throw std::logic_error("algebra_graded_complex: differential left "
                                               "the enumerated bidegrees");
                    d.add(it->second.at(tid), col, v);
                }
            c.set_diff(deg, std::move(d));
        }
        out.pieces.emplace(w, std::move(c));
    }
    return out;
}

ConnectivityReport connectivity_check(const MixedTateInput& q, int weight_bound, int jobs) {
    ConnectivityReport rep;
    rep.weight_bound = weight_bound;
    ValidationReport v = q.q->validate();
    if (!v.ok) {
        rep.pass = false;
        for (const auto& s : v.violations)
            rep.witnesses.push_back("validation: " + s);
        return rep;
    }
    GradedComplex g;
    try {
        g = algebra_graded_complex(q.q, weight_bound);
    } catch (const MathError& e) {
        rep.pass = false;
        rep.witnesses.push_back(e.what());
        return rep;
    }
    rep.table = graded_table(g, jobs);
    for (const auto& row : rep.table) {
        if (row.degree < 0) {
            rep.pass = false;
            std::ostringstream os;
            os << "H^" << row.degree << "(Q_" << row.weight << ") has dimension " << row.dim
               << " (cohomological connectivity requires H^n = 0 for n < 0)";
            rep.witnesses.push_back(os.str());
        }
        if (row.degree == 0 && row.weight >= 1) {
            rep.pass = false;
            std::ostringstream os;
            os << "H^0(Q_" << row.weight << ") has dimension " << row.dim
               << " (must vanish in weights >= 1)";
            rep.witnesses.push_back(os.str());
        }
        if (row.degree == 0 && row.weight == 0 && row.dim != 1) {
            rep.pass = false;
            rep.witnesses.push_back("H^0(Q_0) is not 1-dimensional");
        }
    }
    return rep;
}

BarComplex equivariant_bar(const MixedTateInput& q, int weight_bound, int jobs) {
    if (weight_bound < 0)
        throw std::invalid_argument("equivariant_bar: weight bound must be >= 0");
    BarOptions opt;
    opt.weight_bound = weight_bound;
    opt.jobs = jobs;
    return bar_complex(q.q, opt);
}

// ---------------------------------------------------------------------------
// periodify

namespace {

struct BidegreeBasis {
    // FreeGC: monomials (unit included at (0,0)); StructConst: basis indices.
    std::vector<Monomial> monos;
    std::vector<int> sc;
    int size() const {
        return static_cast<int>(monos.empty() ? sc.size() : monos.size());
    }
};

BidegreeBasis full_bidegree(const Algebra& a, int w, int n) {
    BidegreeBasis out;
    if (a.kind() == Algebra::Kind::FreeGC) {
        if (w < 0)
            return out;
        if (w == 0) {
            if (n == 0)
                out.monos.push_back(Monomial{}); // unit
            return out;
        }
        for (const Monomial& m : a.basis_in_bidegree(w, n))
            out.monos.push_back(m);
    } else {
        for (int i = 0; i < static_cast<int>(a.sc_basis().size()); ++i)
            if (a.sc_basis()[i].weight == w && a.sc_basis()[i].degree == n)
                out.sc.push_back(i);
    }
    return out;
}

bool is_iso(const SparseMatrix& m) {
    return m.rows() == m.cols() && rank(m) == m.rows();
}

} // namespace

const PeriodicPiece* PeriodicAlgebra::piece(int weight, int degree) const {
    for (const auto& p : pieces)
        if (p.weight == weight && p.degree == degree)
            return &p;
    return nullptr;
}

PeriodicAlgebra periodify(AlgebraPtr base, const AlgElement& kappa,
                          std::pair<int, int> weight_window,
                          std::pair<int, int> degree_window, int bound) {
    ValidationReport v = base->validate();
    if (!v.ok)
        throw MathError("periodify: base algebra fails validation");
    const Algebra& A = *base;

    // kappa: homogeneous degree-0 cycle of positive weight.
    int w0;
    if (A.kind() == Algebra::Kind::FreeGC) {
        const FreeElem& k = std::get<FreeElem>(kappa);
        auto bd = A.poly_bidegree(k);
        if (!bd)
            throw MathError("periodify: kappa must be homogeneous");
        if (bd->second != 0)
            throw MathError("periodify: kappa must have degree 0");
        if (bd->first <= 0)
            throw MathError("periodify: kappa must have positive weight (the unit does not qualify)");
        if (!A.poly_d(k).empty())
            throw MathError("periodify: kappa must be a cycle");
        w0 = bd->first;
    } else {
        const SparseVec& k = std::get<SparseVec>(kappa);
        if (k.empty())
            throw MathError("periodify: kappa is zero");
        int wt = A.sc_basis()[k.front().first].weight;
        for (const auto& [i, c] : k) {
            if (A.sc_basis()[i].degree != 0)
                throw MathError("periodify: kappa must have degree 0");
            if (A.sc_basis()[i].weight != wt)
                throw MathError("periodify: kappa must be weight-homogeneous");
        }
        if (wt <= 0)
            throw MathError("periodify: kappa must have positive weight (the unit does not qualify)");
        if (!A.vec_d(k).empty())
            throw MathError("periodify: kappa must be a cycle");
        w0 = wt;
    }

    // Nilpotent kappa collapses the localization: reject up front.
    if (A.kind() == Algebra::Kind::FreeGC) {
        FreeElem pow = std::get<FreeElem>(kappa);
        for (int m = 2; m <= bound + 1; ++m) {
            pow = A.poly_mul(pow, std::get<FreeElem>(kappa));
            if (pow.empty())
                throw MathError("periodify: kappa^" + std::to_string(m) +
                                " = 0; the localization is the zero ring (non-stabilizing)");
        }
    } else {
        SparseVec pow = std::get<SparseVec>(kappa);
        for (int m = 2; m <= bound + 1; ++m) {
            pow = A.vec_mul(pow, std::get<SparseVec>(kappa));
            if (pow.empty())
                throw MathError("periodify: kappa^" + std::to_string(m) +
                                " = 0; the localization is the zero ring (non-stabilizing)");
        }
    }

    PeriodicAlgebra out;
    out.base = base;
    out.kappa_weight = w0;
    out.bound = bound;

    for (int w = weight_window.first; w <= weight_window.second; ++w)
        for (int n = degree_window.first; n <= degree_window.second; ++n) {
            // tower V_m = A(w + m*w0, n), maps = multiplication by kappa
            std::vector<BidegreeBasis> tower;
            std::vector<SparseMatrix> maps;
            for (int m = 0; m <= bound + 1; ++m)
                tower.push_back(full_bidegree(A, w + m * w0, n));
            for (int m = 0; m <= bound; ++m) {
                SparseMatrix M(tower[m + 1].size(), tower[m].size());
                if (A.kind() == Algebra::Kind::FreeGC) {
                    const FreeElem& k = std::get<FreeElem>(kappa);
                    std::map<Monomial, int> pos;
                    for (int i = 0; i < tower[m + 1].size(); ++i)
                        pos[tower[m + 1].monos[i]] = i;
                    for (int col = 0; col < tower[m].size(); ++col) {
                        FreeElem prod =
                            A.poly_mul(k, FreeElem{{tower[m].monos[col], Rat(1)}});
                        for (const auto& [mono, c] : prod) {
                            auto it = pos.find(mono);
                            if (it == pos.end())
                                throw std::logic_error("periodify: product outside bidegree");
                            M.add(it->second, col, c);
                        }
                    }
                } else {
                    const SparseVec& k = std::get<SparseVec>(kappa);
                    std::map<int, int> pos;
                    for (int i = 0; i < tower[m + 1].size(); ++i)
                        pos[tower[m + 1].sc[i]] = i;
                    for (int col = 0; col < tower[m].size(); ++col) {
                        SparseVec prod = A.vec_mul(k, SparseVec{{tower[m].sc[col], Rat(1)}});
                        for (const auto& [i, c] : prod) {
                            auto it = pos.find(i);
                            if (it == pos.end())
                                throw std::logic_error("periodify: product outside bidegree");
                            M.add(it->second, col, c);
                        }
                    }
                }
                maps.push_back(std::move(M));
            }
            int stable_at = -1;
            for (int m = 0; m + 1 <= bound; ++m)
                if (is_iso(maps[m]) && is_iso(maps[m + 1])) {
                    stable_at = m;
                    break;
                }
            if (stable_at < 0) {
                std::ostringstream os;
                os << "periodify: tower at weight " << w << ", degree " << n
                   << " did not stabilize within " << bound << " iterations";
                throw MathError(os.str());
            }
            out.pieces.push_back(PeriodicPiece{w, n, tower[stable_at].size(), stable_at});
        }
    return out;
}

} // namespace dgbar
