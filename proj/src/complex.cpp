#include "dgbar/complex.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace dgbar {

const std::vector<BasisLabel> Complex::kEmpty{};

std::string BasisLabel::str() const {
    static const char* names[] = {"1",  "m", "w", "t", "z", "q", "cs", "ct", "g"};
    std::ostringstream os;
    os << names[kind];
    if (!path.empty()) {
        os << "[";
        for (size_t i = 0; i < path.size(); ++i) {
            if (i)
                os << ",";
            os << path[i];
        }
        os << "]";
    }
    return os.str();
}

Complex::Complex(int lo, int hi) : lo_(lo), hi_(hi) {
    if (lo > hi)
        throw std::invalid_argument("Complex: empty window must use default ctor");
}

Complex Complex::unit() {
    Complex c(0, 0);
    c.set_basis(0, {BasisLabel{BasisLabel::Unit, {}}});
    return c;
}

void Complex::set_basis(int n, std::vector<BasisLabel> basis) {
    if (n < lo_ || n > hi_)
        throw std::out_of_range("Complex::set_basis: degree outside window");
    if (basis.empty())
        basis_.erase(n);
    else
        basis_[n] = std::move(basis);
}

void Complex::set_diff(int n, SparseMatrix d) {
    if (d.rows() != dim(n + 1) || d.cols() != dim(n))
        throw std::invalid_argument("Complex::set_diff: shape mismatch at degree " +
                                    std::to_string(n));
    if (d.is_zero())
        diff_.erase(n);
    else
        diff_[n] = std::move(d);
}

int Complex::dim(int n) const {
    auto it = basis_.find(n);
    return it == basis_.end() ? 0 : static_cast<int>(it->second.size());
}

const std::vector<BasisLabel>& Complex::basis(int n) const {
    auto it = basis_.find(n);
    return it == basis_.end() ? kEmpty : it->second;
}

SparseMatrix Complex::diff(int n) const {
    auto it = diff_.find(n);
    if (it != diff_.end())
        return it->second;
    return SparseMatrix(dim(n + 1), dim(n));
}

long Complex::total_dim() const {
    long t = 0;
    for (const auto& [n, b] : basis_)
        t += static_cast<long>(b.size());
    return t;
}

ComplexReport check_complex(const Complex& c) {
    ComplexReport rep;
    for (int n = c.lo(); n <= c.hi(); ++n) {
        SparseMatrix d = c.diff(n);
        if (d.rows() != c.dim(n + 1) || d.cols() != c.dim(n)) {
            rep.ok = false;
            rep.problems.push_back("degree " + std::to_string(n) + ": differential shape " +
                                   std::to_string(d.rows()) + "x" + std::to_string(d.cols()) +
                                   " does not match basis sizes");
            continue;
        }
        if (n + 1 <= c.hi()) {
            SparseMatrix dd = c.diff(n + 1).compose(d);
            if (!dd.is_zero()) {
                rep.ok = false;
                rep.problems.push_back("degree " + std::to_string(n) + ": d.d != 0");
            }
        }
    }
    return rep;
}

Cohomology cohomology(const Complex& c, int n) {
    Cohomology h;
    if (c.dim(n) == 0)
        return h;
    QuotientReducer q;
    SparseMatrix into = c.diff(n - 1);
    for (int col = 0; col < into.cols(); ++col) {
        SparseVec b = into.column(col);
        if (!b.empty())
            q.add_boundary(b);
    }
    for (const SparseVec& z : kernel_basis(c.diff(n)))
        q.add_candidate(z);
    h.dim = q.classes();
    h.representatives = q.representatives();
    return h;
}

std::map<int, int> cohomology_table(const Complex& c) {
    std::map<int, int> t;
    for (int n = c.lo(); n <= c.hi(); ++n) {
        int d = cohomology(c, n).dim;
        if (d)
            t[n] = d;
    }
    return t;
}

Complex shift(const Complex& c, int m) {
    if (c.window_empty())
        return c;
    Complex out(c.lo() - m, c.hi() - m);
    const Rat sign = (m % 2 == 0) ? Rat(1) : Rat(-1);
    for (int n = out.lo(); n <= out.hi(); ++n)
        out.set_basis(n, c.basis(n + m));
    for (int n = out.lo(); n <= out.hi(); ++n)
        out.set_diff(n, c.diff(n + m).scaled(sign));
    return out;
}

Complex tensor_product(const Complex& a, const Complex& b) {
    if (a.window_empty() || b.window_empty())
        return Complex();
    Complex out(a.lo() + b.lo(), a.hi() + b.hi());

    // Degree-n basis: pairs (x,y), |x|+|y| = n, ordered by (|x|, idx, idy).
    std::map<int, std::map<std::pair<std::pair<int, int>, int>, int>> index;
    for (int n = out.lo(); n <= out.hi(); ++n) {
        std::vector<BasisLabel> basis;
        for (int p = a.lo(); p <= a.hi(); ++p) {
            int q = n - p;
            if (q < b.lo() || q > b.hi())
                continue;
            for (int i = 0; i < a.dim(p); ++i)
                for (int j = 0; j < b.dim(q); ++j) {
                    index[n][{{p, i}, j}] = static_cast<int>(basis.size());
                    basis.push_back(BasisLabel{BasisLabel::Pair, {p, i, n - p, j}});
                }
        }
        out.set_basis(n, std::move(basis));
    }
    for (int n = out.lo(); n < out.hi(); ++n) {
        SparseMatrix d(out.dim(n + 1), out.dim(n));
        const auto& idx_n = index[n];
        const auto& idx_n1 = index[n + 1];
        for (const auto& [key, col] : idx_n) {
            const auto [pi, j] = key;
            const auto [p, i] = pi;
            const int q = n - p;
            // dx (x) y
            SparseMatrix da = a.diff(p);
            for (const auto& [r, v] : da.column(i)) {
                auto it = idx_n1.find({{p + 1, r}, j});
                assert(it != idx_n1.end());
                d.add(it->second, col, v);
            }
            // (-1)^p x (x) dy
            const Rat sign = (((p % 2) + 2) % 2 == 0) ? Rat(1) : Rat(-1);
            SparseMatrix db = b.diff(q);
            for (const auto& [r, v] : db.column(j)) {
                auto it = idx_n1.find({{p, i}, r});
                assert(it != idx_n1.end());
                d.add(it->second, col, sign * v);
            }
        }
        out.set_diff(n, std::move(d));
    }
    return out;
}

Complex truncate_leq(const Complex& c, int n) {
    if (c.window_empty() || n < c.lo())
        return Complex();
    if (n >= c.hi())
        return c;
    Complex out(c.lo(), n);
    for (int k = c.lo(); k < n; ++k)
        out.set_basis(k, c.basis(k));

    // Kernel vectors from the RREF carry a 1 at "their" free column and 0 at
    // every other free column, so coordinates are read off there.
    Rref r = rref(c.diff(n));
    std::vector<SparseVec> cycles = kernel_basis(c.diff(n));
    std::vector<BasisLabel> zbasis;
    for (int i = 0; i < static_cast<int>(cycles.size()); ++i)
        zbasis.push_back(BasisLabel{BasisLabel::Cycle, {n, i}});
    out.set_basis(n, std::move(zbasis));

    for (int k = c.lo(); k < n - 1; ++k)
        out.set_diff(k, c.diff(k));
    if (n - 1 >= c.lo() && out.dim(n) > 0 && out.dim(n - 1) > 0) {
        SparseMatrix d(static_cast<int>(cycles.size()), c.dim(n - 1));
        SparseMatrix dn1 = c.diff(n - 1);
        for (int col = 0; col < dn1.cols(); ++col) {
            SparseVec v = dn1.column(col);
            for (int i = 0; i < static_cast<int>(r.free_cols.size()); ++i) {
                const Rat* coeff = sv_at(v, r.free_cols[i]);
                if (coeff) {
                    d.add(i, col, *coeff);
                    sv_axpy(v, -*coeff, cycles[i]);
                }
            }
            if (!v.empty())
                throw MathError("truncate_leq: boundary not a cycle (d.d != 0?)");
        }
        out.set_diff(n - 1, std::move(d));
    }
    return out;
}

Complex truncate_geq(const Complex& c, int n) {
    if (c.window_empty() || n > c.hi())
        return Complex();
    if (n <= c.lo())
        return c;
    Complex out(n, c.hi());
    for (int k = n + 1; k <= c.hi(); ++k)
        out.set_basis(k, c.basis(k));

    CokernelQuotient coker(c.diff(n - 1));
    std::vector<BasisLabel> qbasis;
    for (int i = 0; i < coker.dim(); ++i)
        qbasis.push_back(BasisLabel{BasisLabel::Coset, {n, i}});
    out.set_basis(n, std::move(qbasis));

    for (int k = n + 1; k < c.hi() + 1; ++k)
        out.set_diff(k, c.diff(k));
    if (out.dim(n) > 0 && c.dim(n + 1) > 0) {
        SparseMatrix d(c.dim(n + 1), coker.dim());
        SparseMatrix dn = c.diff(n);
        const auto& pos = coker.representative_positions();
        for (int i = 0; i < coker.dim(); ++i)
            for (const auto& [r, v] : dn.column(pos[i]))
                d.add(r, i, v);
        out.set_diff(n, std::move(d));
    }
    return out;
}

SparseMatrix ChainMap::component(int n) const {
    auto it = components.find(n);
    if (it != components.end())
        return it->second;
    return SparseMatrix(target.dim(n), source.dim(n));
}

bool chain_map_valid(const ChainMap& f, std::string* why) {
    int lo = std::min(f.source.lo(), f.target.lo());
    int hi = std::max(f.source.hi(), f.target.hi());
    for (int n = lo; n <= hi; ++n) {
        SparseMatrix fn = f.component(n);
        if (fn.rows() != f.target.dim(n) || fn.cols() != f.source.dim(n)) {
            if (why)
                *why = "component shape mismatch at degree " + std::to_string(n);
            return false;
        }
        SparseMatrix lhs = f.target.diff(n).compose(fn);
        SparseMatrix rhs = f.component(n + 1).compose(f.source.diff(n));
        if (!(lhs == rhs)) {
            if (why)
                *why = "does not commute with differentials at degree " + std::to_string(n);
            return false;
        }
    }
    return true;
}

Complex mapping_cone(const ChainMap& f) {
    std::string why;
    if (!chain_map_valid(f, &why))
        throw MathError("mapping_cone: invalid chain map: " + why);
    const Complex& a = f.source;
    const Complex& b = f.target;
    int lo = std::min(a.window_empty() ? b.lo() : a.lo() - 1, b.window_empty() ? a.lo() - 1 : b.lo());
    int hi = std::max(a.window_empty() ? b.hi() : a.hi() - 1, b.window_empty() ? a.hi() - 1 : b.hi());
    if (a.window_empty() && b.window_empty())
        return Complex();
    Complex out(lo, hi);
    for (int n = lo; n <= hi; ++n) {
        std::vector<BasisLabel> basis;
        for (int i = 0; i < a.dim(n + 1); ++i)
            basis.push_back(BasisLabel{BasisLabel::ConeSrc, {n + 1, i}});
        for (int j = 0; j < b.dim(n); ++j)
            basis.push_back(BasisLabel{BasisLabel::ConeTgt, {n, j}});
        out.set_basis(n, std::move(basis));
    }
    for (int n = lo; n < hi; ++n) {
        SparseMatrix d(out.dim(n + 1), out.dim(n));
        const int a_n1 = a.dim(n + 1); // source-summand width at degree n
        const int a_n2 = a.dim(n + 2);
        SparseMatrix da = a.diff(n + 1);
        SparseMatrix db = b.diff(n);
        SparseMatrix fn = f.component(n + 1);
        for (int col = 0; col < a_n1; ++col) {
            for (const auto& [r, v] : da.column(col))
                d.add(r, col, -v);
            for (const auto& [r, v] : fn.column(col))
                d.add(a_n2 + r, col, v);
        }
        for (int col = 0; col < b.dim(n); ++col)
            for (const auto& [r, v] : db.column(col))
                d.add(a_n2 + r, a_n1 + col, v);
        out.set_diff(n, std::move(d));
    }
    return out;
}

bool is_acyclic(const Complex& c) {
    for (int n = c.lo(); n <= c.hi(); ++n)
        if (cohomology(c, n).dim != 0)
            return false;
    return true;
}

bool is_quasi_iso(const ChainMap& f) { return is_acyclic(mapping_cone(f)); }

ChainMap braiding(const Complex& a, const Complex& b) {
    ChainMap f;
    f.source = tensor_product(a, b);
    f.target = tensor_product(b, a);
    // Rebuild the target index to place entries.
    std::map<std::pair<std::pair<int, int>, std::pair<int, int>>, int> tgt_index;
    for (int n = f.target.lo(); n <= f.target.hi(); ++n) {
        const auto& basis = f.target.basis(n);
        for (int k = 0; k < static_cast<int>(basis.size()); ++k) {
            const auto& p = basis[k].path; // [degL, idxL, degR, idxR]
            tgt_index[{{p[0], p[1]}, {p[2], p[3]}}] = k;
        }
    }
    for (int n = f.source.lo(); n <= f.source.hi(); ++n) {
        SparseMatrix m(f.target.dim(n), f.source.dim(n));
        const auto& basis = f.source.basis(n);
        for (int k = 0; k < static_cast<int>(basis.size()); ++k) {
            const auto& p = basis[k].path;
            const int degx = p[0], idx = p[1], degy = p[2], idy = p[3];
            auto it = tgt_index.find({{degy, idy}, {degx, idx}});
            assert(it != tgt_index.end());
            const bool neg = (degx % 2 != 0) && (degy % 2 != 0);
            m.add(it->second, k, neg ? Rat(-1) : Rat(1));
        }
        if (m.rows() || m.cols())
            f.components[n] = std::move(m);
    }
    return f;
}

long euler_characteristic(const Complex& c) {
    long chi = 0;
    for (int n = c.lo(); n <= c.hi(); ++n)
        chi += (n % 2 == 0 ? 1 : -1) * static_cast<long>(c.dim(n));
    return chi;
}

} // namespace dgbar
