#ifndef DGBAR_SPARSE_HPP
#define DGBAR_SPARSE_HPP

#include "dgbar/rational.hpp"

#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace dgbar {

// Sparse vector: (index, value) pairs sorted by index, no explicit zeros.
using SparseVec = std::vector<std::pair<int, Rat>>;

SparseVec sv_normalize(std::vector<std::pair<int, Rat>> terms); // sort + merge + drop zeros
void sv_axpy(SparseVec& y, const Rat& c, const SparseVec& x);   // y += c*x
SparseVec sv_scaled(const SparseVec& x, const Rat& c);
const Rat* sv_at(const SparseVec& v, int idx); // nullptr if absent
bool sv_equal(const SparseVec& a, const SparseVec& b);
std::string sv_str(const SparseVec& v);

class SparseMatrix {
public:
    SparseMatrix() : rows_(0), cols_(0) {}
    SparseMatrix(int rows, int cols);
    static SparseMatrix identity(int n);
    static SparseMatrix zero(int rows, int cols) { return SparseMatrix(rows, cols); }
    static SparseMatrix from_columns(int rows, const std::vector<SparseVec>& cols);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    long nnz() const;
    bool is_zero() const { return nnz() == 0; }

    // Accumulating insert; final value 0 removes the entry.
    void add(int r, int c, const Rat& v);
    void set(int r, int c, const Rat& v);
    Rat get(int r, int c) const;

    const SparseVec& row(int r) const { return row_[r]; }
    SparseVec column(int c) const;

    SparseVec apply(const SparseVec& x) const;       // this * x
    SparseMatrix compose(const SparseMatrix& g) const; // this * g
    SparseMatrix transpose() const;
    SparseMatrix scaled(const Rat& c) const;

    bool operator==(const SparseMatrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && row_ == o.row_; }

private:
    int rows_, cols_;
    std::vector<SparseVec> row_;
};

// Pivot selection for the elimination engine. Both rules produce the same
// RREF (it is canonical); Markowitz limits fill-in, FirstFit is the plain
// strategy kept around for the independence property test.
enum class PivotRule { Markowitz, FirstFit };

struct Rref {
    int rank = 0;
    std::vector<int> pivot_cols;              // ascending
    std::vector<SparseVec> rows;              // reduced rows, pivots normalized to 1
    std::vector<int> free_cols;               // ascending
};

// Matrices under this edge size go through the dense fraction-free path.
inline constexpr int kDenseCutoff = 64;

Rref rref(const SparseMatrix& m, PivotRule rule = PivotRule::Markowitz);

int rank(const SparseMatrix& m, PivotRule rule = PivotRule::Markowitz);

// Exactly cols - rank vectors, each with m*v = 0; canonical (from RREF).
std::vector<SparseVec> kernel_basis(const SparseMatrix& m, PivotRule rule = PivotRule::Markowitz);

// Quotient of the target space Q^rows by the column space of m.
// Representatives are standard basis vectors at non-pivot positions of the
// column-space echelon; reduce() rewrites any vector in those coordinates.
class CokernelQuotient {
public:
    CokernelQuotient() = default;
    explicit CokernelQuotient(const SparseMatrix& m, PivotRule rule = PivotRule::Markowitz);

    int dim() const { return static_cast<int>(rep_positions_.size()); }
    int ambient() const { return ambient_; }
    const std::vector<int>& representative_positions() const { return rep_positions_; }
    std::vector<SparseVec> representatives() const;

    // Coordinates of [v] in the representatives; exact.
    SparseVec reduce(const SparseVec& v) const;

private:
    int ambient_ = 0;
    std::vector<int> rep_positions_;
    std::map<int, SparseVec> echelon_; // pivot position -> reduced column-space row
};

// Incremental reduced-echelon span with insertion; rows are kept mutually
// reduced with unit pivots, so membership and coordinates are canonical.
class EchelonBasis {
public:
    SparseVec reduce(const SparseVec& v) const;
    bool insert(SparseVec v); // true if v enlarged the span
    int rank() const { return static_cast<int>(rows_.size()); }
    bool contains(const SparseVec& v) const { return reduce(v).empty(); }
    const std::map<int, SparseVec>& rows() const { return rows_; }

private:
    std::map<int, SparseVec> rows_; // pivot index -> row
};

// Cycle space modulo boundary space with chosen representatives: the
// workhorse behind cohomology classes and H^0 structure constants.
// Boundaries are inserted first; candidate cycles that enlarge the span
// become representatives (lexicographically least echelon form).
class QuotientReducer {
public:
    void add_boundary(const SparseVec& b);
    // Returns representative index if v added a new class, nullopt otherwise.
    std::optional<int> add_candidate(const SparseVec& v);
    int classes() const { return static_cast<int>(reps_.size()); }
    const std::vector<SparseVec>& representatives() const { return reps_; }

    // Coordinates of [v] in the representatives; throws MathError-free:
    // returns nullopt if v is not in span(boundaries, reps).
    std::optional<SparseVec> coordinates(const SparseVec& v) const;

private:
    struct Row {
        SparseVec vec;
        int rep_index; // -1 for boundary rows
    };
    std::map<int, Row> rows_; // pivot -> row
    std::vector<SparseVec> reps_;
};

} // namespace dgbar

#endif
