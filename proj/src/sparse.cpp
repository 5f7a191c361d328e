#include "dgbar/sparse.hpp"

#include <algorithm>
#include <cassert>
#include <list>
#include <sstream>
#include <stdexcept>

namespace dgbar {

SparseVec sv_normalize(std::vector<std::pair<int, Rat>> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    SparseVec out;
    out.reserve(terms.size());
    for (auto& t : terms) {
        if (!out.empty() && out.back().first == t.first)
            out.back().second += t.second;
        else
            out.push_back(std::move(t));
        if (!out.empty() && is_zero(out.back().second))
            out.pop_back();
    }
    return out;
}

void sv_axpy(SparseVec& y, const Rat& c, const SparseVec& x) {
    if (is_zero(c) || x.empty())
        return;
    SparseVec out;
    out.reserve(y.size() + x.size());
    size_t i = 0, j = 0;
    while (i < y.size() || j < x.size()) {
        if (j == x.size() || (i < y.size() && y[i].first < x[j].first)) {
            out.push_back(y[i++]);
        } else if (i == y.size() || x[j].first < y[i].first) {
            out.emplace_back(x[j].first, c * x[j].second);
            if (is_zero(out.back().second))
                out.pop_back();
            ++j;
        } else {
            Rat v = y[i].second + c * x[j].second;
            if (!is_zero(v))
                out.emplace_back(y[i].first, std::move(v));
            ++i;
            ++j;
        }
    }
    y = std::move(out);
}

SparseVec sv_scaled(const SparseVec& x, const Rat& c) {
    SparseVec out;
    if (is_zero(c))
        return out;
    out.reserve(x.size());
    for (const auto& [i, v] : x)
        out.emplace_back(i, c * v);
    return out;
}

const Rat* sv_at(const SparseVec& v, int idx) {
    auto it = std::lower_bound(v.begin(), v.end(), idx,
                               [](const auto& p, int k) { return p.first < k; });
    if (it != v.end() && it->first == idx)
        return &it->second;
    return nullptr;
}

bool sv_equal(const SparseVec& a, const SparseVec& b) { return a == b; }

std::string sv_str(const SparseVec& v) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i)
            os << " ";
        os << v[i].first << ":" << rat_str(v[i].second);
    }
    os << ")";
    return os.str();
}

SparseMatrix::SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols), row_(rows) {
    if (rows < 0 || cols < 0)
        throw std::invalid_argument("SparseMatrix: negative shape");
}

SparseMatrix SparseMatrix::identity(int n) {
    SparseMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        m.row_[i].emplace_back(i, Rat(1));
    return m;
}

SparseMatrix SparseMatrix::from_columns(int rows, const std::vector<SparseVec>& cols) {
    SparseMatrix m(rows, static_cast<int>(cols.size()));
    for (int c = 0; c < static_cast<int>(cols.size()); ++c)
        for (const auto& [r, v] : cols[c])
            m.add(r, c, v);
    return m;
}

long SparseMatrix::nnz() const {
    long n = 0;
    for (const auto& r : row_)
        n += static_cast<long>(r.size());
    return n;
}

void SparseMatrix::add(int r, int c, const Rat& v) {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
        throw std::out_of_range("SparseMatrix::add: index out of range");
    if (dgbar::is_zero(v))
        return;
    auto& row = row_[r];
    auto it = std::lower_bound(row.begin(), row.end(), c,
                               [](const auto& p, int k) { return p.first < k; });
    if (it != row.end() && it->first == c) {
        it->second += v;
        if (dgbar::is_zero(it->second))
            row.erase(it);
    } else {
        row.insert(it, {c, v});
    }
}

void SparseMatrix::set(int r, int c, const Rat& v) {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
        throw std::out_of_range("SparseMatrix::set: index out of range");
    auto& row = row_[r];
    auto it = std::lower_bound(row.begin(), row.end(), c,
                               [](const auto& p, int k) { return p.first < k; });
    if (it != row.end() && it->first == c) {
        if (dgbar::is_zero(v))
            row.erase(it);
        else
            it->second = v;
    } else if (!dgbar::is_zero(v)) {
        row.insert(it, {c, v});
    }
}

Rat SparseMatrix::get(int r, int c) const {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_)
        throw std::out_of_range("SparseMatrix::get: index out of range");
    const Rat* p = sv_at(row_[r], c);
    return p ? *p : Rat(0);
}

SparseVec SparseMatrix::column(int c) const {
    SparseVec out;
    for (int r = 0; r < rows_; ++r) {
        const Rat* p = sv_at(row_[r], c);
        if (p)
            out.emplace_back(r, *p);
    }
    return out;
}

SparseVec SparseMatrix::apply(const SparseVec& x) const {
    std::vector<std::pair<int, Rat>> terms;
    for (const auto& [c, xv] : x) {
        if (c < 0 || c >= cols_)
            throw std::out_of_range("SparseMatrix::apply: vector index out of range");
    }
    for (int r = 0; r < rows_; ++r) {
        Rat acc(0);
        const auto& row = row_[r];
        size_t i = 0, j = 0;
        while (i < row.size() && j < x.size()) {
            if (row[i].first < x[j].first)
                ++i;
            else if (x[j].first < row[i].first)
                ++j;
            else {
                acc += row[i].second * x[j].second;
                ++i;
                ++j;
            }
        }
        if (!dgbar::is_zero(acc))
            terms.emplace_back(r, std::move(acc));
    }
    return terms;
}

SparseMatrix SparseMatrix::compose(const SparseMatrix& g) const {
    if (cols_ != g.rows_)
        throw std::invalid_argument("SparseMatrix::compose: shape mismatch");
    SparseMatrix out(rows_, g.cols_);
    for (int r = 0; r < rows_; ++r) {
        std::vector<std::pair<int, Rat>> terms;
        for (const auto& [k, v] : row_[r])
            for (const auto& [c, w] : g.row_[k])
                terms.emplace_back(c, v * w);
        out.row_[r] = sv_normalize(std::move(terms));
    }
    return out;
}

SparseMatrix SparseMatrix::transpose() const {
    SparseMatrix out(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
        for (const auto& [c, v] : row_[r])
            out.row_[c].emplace_back(r, v);
    return out;
}

SparseMatrix SparseMatrix::scaled(const Rat& c) const {
    SparseMatrix out(rows_, cols_);
    if (dgbar::is_zero(c))
        return out;
    for (int r = 0; r < rows_; ++r)
        out.row_[r] = sv_scaled(row_[r], c);
    return out;
}

namespace {

// Dense fraction-free (Bareiss) forward elimination; used for small blocks
// where sparse bookkeeping costs more than it saves. Returns row-echelon
// rows which the caller normalizes into RREF.
Rref rref_dense(const SparseMatrix& m) {
    const int nr = m.rows(), nc = m.cols();
    std::vector<std::vector<Rat>> a(nr, std::vector<Rat>(nc, Rat(0)));
    for (int r = 0; r < nr; ++r)
        for (const auto& [c, v] : m.row(r))
            a[r][c] = v;

    Rref out;
    int lead_row = 0;
    Rat div_prev(1);
    for (int c = 0; c < nc && lead_row < nr; ++c) {
        int prow = -1;
        for (int r = lead_row; r < nr; ++r)
            if (!is_zero(a[r][c])) {
                prow = r;
                break;
            }
        if (prow < 0)
            continue;
        std::swap(a[lead_row], a[prow]);
        const Rat pivot = a[lead_row][c];
        for (int r = lead_row + 1; r < nr; ++r) {
            const Rat factor = a[r][c];
            for (int j = c; j < nc; ++j)
                a[r][j] = (a[r][j] * pivot - factor * a[lead_row][j]) / div_prev;
        }
        div_prev = pivot;
        out.pivot_cols.push_back(c);
        ++lead_row;
    }
    out.rank = static_cast<int>(out.pivot_cols.size());

    // Back-substitute into reduced form with unit pivots.
    for (int i = out.rank - 1; i >= 0; --i) {
        const int pc = out.pivot_cols[i];
        const Rat inv = Rat(1) / a[i][pc];
        for (int j = pc; j < nc; ++j)
            a[i][j] *= inv;
        for (int r = 0; r < i; ++r) {
            const Rat f = a[r][pc];
            if (is_zero(f))
                continue;
            for (int j = pc; j < nc; ++j)
                a[r][j] -= f * a[i][j];
        }
    }
    out.rows.resize(out.rank);
    for (int i = 0; i < out.rank; ++i) {
        SparseVec row;
        for (int j = 0; j < nc; ++j)
            if (!is_zero(a[i][j]))
                row.emplace_back(j, a[i][j]);
        out.rows[i] = std::move(row);
    }
    return out;
}

// Sparse elimination with selectable pivot rule.
Rref rref_sparse(const SparseMatrix& m, PivotRule rule) {
    const int nc = m.cols();
    std::list<SparseVec> active;
    for (int r = 0; r < m.rows(); ++r)
        if (!m.row(r).empty())
            active.push_back(m.row(r));

    std::vector<int> col_count(nc, 0);
    auto recount = [&]() {
        std::fill(col_count.begin(), col_count.end(), 0);
        for (const auto& row : active)
            for (const auto& [c, v] : row)
                ++col_count[c];
    };

    std::map<int, SparseVec> done; // pivot col -> row
    while (!active.empty()) {
        auto pick = active.begin();
        int pick_col = pick->front().first;
        if (rule == PivotRule::FirstFit) {
            for (auto it = active.begin(); it != active.end(); ++it) {
                int lead = it->front().first;
                if (lead < pick_col || (lead == pick_col && it->size() < pick->size())) {
                    pick = it;
                    pick_col = lead;
                }
            }
        } else {
            recount();
            long best = -1;
            for (auto it = active.begin(); it != active.end(); ++it) {
                for (const auto& [c, v] : *it) {
                    long score =
                        (static_cast<long>(it->size()) - 1) * (col_count[c] - 1);
                    if (best < 0 || score < best ||
                        (score == best && c < pick_col)) {
                        best = score;
                        pick = it;
                        pick_col = c;
                    }
                }
            }
        }

        SparseVec prow = std::move(*pick);
        active.erase(pick);
        const Rat* pv = sv_at(prow, pick_col);
        assert(pv && !is_zero(*pv));
        if (*pv != 1) {
            const Rat inv = Rat(1) / *pv;
            for (auto& [c, v] : prow)
                v *= inv;
        }
        for (auto it = active.begin(); it != active.end();) {
            const Rat* f = sv_at(*it, pick_col);
            if (f) {
                sv_axpy(*it, -*f, prow);
                if (it->empty()) {
                    it = active.erase(it);
                    continue;
                }
            }
            ++it;
        }
        done[pick_col] = std::move(prow);
    }

    // The forward pass produced an independent basis of the row space, but
    // Markowitz pivots in arbitrary column order, so the pivot set need not
    // be the canonical staircase. Re-reduce the (rank-many) rows through the
    // front-pivot echelon to obtain the unique RREF.
    EchelonBasis canonical;
    for (auto& [pc, row] : done)
        canonical.insert(std::move(row));
    Rref out;
    for (const auto& [pivot, row] : canonical.rows()) {
        out.pivot_cols.push_back(pivot);
        out.rows.push_back(row);
    }
    out.rank = static_cast<int>(out.pivot_cols.size());
    return out;
}

} // namespace

Rref rref(const SparseMatrix& m, PivotRule rule) {
    Rref out;
    if (m.rows() < kDenseCutoff && m.cols() < kDenseCutoff)
        out = rref_dense(m);
    else
        out = rref_sparse(m, rule);

    std::vector<bool> is_pivot(m.cols(), false);
    for (int c : out.pivot_cols)
        is_pivot[c] = true;
    for (int c = 0; c < m.cols(); ++c)
        if (!is_pivot[c])
            out.free_cols.push_back(c);
    return out;
}

int rank(const SparseMatrix& m, PivotRule rule) { return rref(m, rule).rank; }

std::vector<SparseVec> kernel_basis(const SparseMatrix& m, PivotRule rule) {
    Rref r = rref(m, rule);
    std::vector<SparseVec> out;
    out.reserve(r.free_cols.size());
    for (int f : r.free_cols) {
        std::vector<std::pair<int, Rat>> terms;
        terms.emplace_back(f, Rat(1));
        for (int i = 0; i < r.rank; ++i) {
            const Rat* v = sv_at(r.rows[i], f);
            if (v)
                terms.emplace_back(r.pivot_cols[i], -*v);
        }
        out.push_back(sv_normalize(std::move(terms)));
    }
    return out;
}

CokernelQuotient::CokernelQuotient(const SparseMatrix& m, PivotRule rule)
    : ambient_(m.rows()) {
    Rref r = rref(m.transpose(), rule); // rows of m^T = columns of m
    std::vector<bool> is_pivot(ambient_, false);
    for (int i = 0; i < r.rank; ++i) {
        echelon_[r.pivot_cols[i]] = r.rows[i];
        is_pivot[r.pivot_cols[i]] = true;
    }
    for (int p = 0; p < ambient_; ++p)
        if (!is_pivot[p])
            rep_positions_.push_back(p);
}

std::vector<SparseVec> CokernelQuotient::representatives() const {
    std::vector<SparseVec> out;
    out.reserve(rep_positions_.size());
    for (int p : rep_positions_)
        out.push_back(SparseVec{{p, Rat(1)}});
    return out;
}

SparseVec CokernelQuotient::reduce(const SparseVec& v) const {
    SparseVec rem = v;
    for (const auto& [pivot, row] : echelon_) {
        const Rat* f = sv_at(rem, pivot);
        if (f)
            sv_axpy(rem, -*f, row);
    }
    // rem is supported on representative positions; rewrite indices as
    // representative ordinals.
    SparseVec out;
    out.reserve(rem.size());
    for (const auto& [p, val] : rem) {
        auto it = std::lower_bound(rep_positions_.begin(), rep_positions_.end(), p);
        assert(it != rep_positions_.end() && *it == p);
        out.emplace_back(static_cast<int>(it - rep_positions_.begin()), val);
    }
    return out;
}

SparseVec EchelonBasis::reduce(const SparseVec& v) const {
    SparseVec rem = v;
    while (!rem.empty()) {
        auto it = rows_.find(rem.front().first);
        if (it == rows_.end())
            break;
        sv_axpy(rem, -rem.front().second, it->second);
    }
    // Leading term is now pivot-free; continue reducing interior terms.
    SparseVec out;
    size_t i = 0;
    while (i < rem.size()) {
        auto it = rows_.find(rem[i].first);
        if (it != rows_.end()) {
            sv_axpy(rem, -rem[i].second, it->second);
            // restart scan at same position (vector shrank/changed)
        } else {
            ++i;
        }
    }
    out = std::move(rem);
    return out;
}

bool EchelonBasis::insert(SparseVec v) {
    v = reduce(v);
    if (v.empty())
        return false;
    const Rat inv = Rat(1) / v.front().second;
    if (inv != 1)
        for (auto& [c, val] : v)
            val *= inv;
    const int pivot = v.front().first;
    for (auto& [p, row] : rows_) {
        const Rat* f = sv_at(row, pivot);
        if (f)
            sv_axpy(row, -*f, v);
    }
    rows_[pivot] = std::move(v);
    return true;
}

void QuotientReducer::add_boundary(const SparseVec& b) {
    if (!reps_.empty())
        throw std::logic_error("QuotientReducer: all boundaries must precede candidates");
    SparseVec v = b;
    while (!v.empty()) {
        auto it = rows_.find(v.front().first);
        if (it == rows_.end())
            break;
        sv_axpy(v, -v.front().second, it->second.vec);
    }
    size_t i = 0;
    while (i < v.size()) {
        auto it = rows_.find(v[i].first);
        if (it != rows_.end())
            sv_axpy(v, -v[i].second, it->second.vec);
        else
            ++i;
    }
    if (v.empty())
        return;
    const Rat inv = Rat(1) / v.front().second;
    if (inv != 1)
        for (auto& [c, val] : v)
            val *= inv;
    const int pivot = v.front().first;
    for (auto& [p, row] : rows_) {
        const Rat* f = sv_at(row.vec, pivot);
        if (f)
            sv_axpy(row.vec, -*f, v);
    }
    rows_[pivot] = Row{std::move(v), -1};
}

std::optional<int> QuotientReducer::add_candidate(const SparseVec& cand) {
    SparseVec v = cand;
    size_t i = 0;
    while (i < v.size()) {
        auto it = rows_.find(v[i].first);
        if (it != rows_.end())
            sv_axpy(v, -v[i].second, it->second.vec);
        else
            ++i;
    }
    if (v.empty())
        return std::nullopt;
    const Rat inv = Rat(1) / v.front().second;
    if (inv != 1)
        for (auto& [c, val] : v)
            val *= inv;
    const int pivot = v.front().first;
    // Back-eliminate only representative rows: a boundary row that absorbed a
    // representative would stop spanning the boundary space.
    for (auto& [p, row] : rows_) {
        if (row.rep_index < 0)
            continue;
        const Rat* f = sv_at(row.vec, pivot);
        if (f)
            sv_axpy(row.vec, -*f, v);
    }
    const int idx = static_cast<int>(reps_.size());
    rows_[pivot] = Row{v, idx};
    reps_.push_back(std::move(v));
    for (auto& [p, row] : rows_)
        if (row.rep_index >= 0)
            reps_[row.rep_index] = row.vec;
    return idx;
}

std::optional<SparseVec> QuotientReducer::coordinates(const SparseVec& v) const {
    SparseVec rem = v;
    SparseVec coords;
    size_t i = 0;
    while (i < rem.size()) {
        auto it = rows_.find(rem[i].first);
        if (it != rows_.end()) {
            const Rat c = rem[i].second;
            if (it->second.rep_index >= 0)
                coords.emplace_back(it->second.rep_index, c);
            sv_axpy(rem, -c, it->second.vec);
        } else {
            ++i;
        }
    }
    if (!rem.empty())
        return std::nullopt;
    return sv_normalize(std::move(coords));
}

} // namespace dgbar
