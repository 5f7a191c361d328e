#ifndef DGBAR_WEIGHTED_HPP
#define DGBAR_WEIGHTED_HPP

#include "dgbar/bar.hpp"

#include <variant>

namespace dgbar {

// Z-weight-graded complex: finitely many nonzero pieces.
struct GradedComplex {
    std::map<int, Complex> pieces;

    static GradedComplex unit(); // Q at weight 0, degree 0
    int dim(int weight, int degree) const;
};

// Convolution tensor: piece at weight k = (+)_{i+j=k} tensor(a_i, b_j),
// with the Koszul signs of the underlying tensor of complexes.
GradedComplex graded_tensor(const GradedComplex& a, const GradedComplex& b);

Table graded_table(const GradedComplex& g, int jobs = 1);

// Weight-graded augmented algebra intended as a chain model of the
// mixed-Tate data: augmentation ideal in weights >= 1, finite bidegrees.
struct MixedTateInput {
    AlgebraPtr q;
    std::string provenance;
};

// Per-weight complex of the algebra itself (unit at weight 0).
GradedComplex algebra_graded_complex(AlgebraPtr a, int weight_bound);

struct ConnectivityReport {
    bool pass = true;
    Table table; // per (weight, degree) cohomology of Q
    std::vector<std::string> witnesses;
    int weight_bound = 0;
};

// PASS iff H^n(Q_w) = 0 for n < 0 at every checked weight, H^0 is
// 1-dimensional at weight 0 and zero at weights >= 1.
ConnectivityReport connectivity_check(const MixedTateInput& q, int weight_bound, int jobs = 1);

// The equivariant bar construction: exact in every bidegree of weight <= W
// (Adams positivity bounds word length by weight).
BarComplex equivariant_bar(const MixedTateInput& q, int weight_bound, int jobs = 1);

// A homogeneous algebra element: polynomial for FreeGC, basis vector for
// StructConst.
using AlgElement = std::variant<FreeElem, SparseVec>;

struct PeriodicPiece {
    int weight;
    int degree;
    int dim;
    int steps; // stabilization index in the multiplication-by-kappa tower
};

struct PeriodicAlgebra {
    AlgebraPtr base;
    int kappa_weight = 0;
    int bound = 8;
    std::vector<PeriodicPiece> pieces; // sorted by (weight, degree)
    const PeriodicPiece* piece(int weight, int degree) const;
};

// Stabilized colimit of multiplication-by-kappa towers on the requested
// bidegree window. kappa must be a degree-0 cycle of positive weight and
// non-nilpotent within the bound; towers that do not stabilize (two
// consecutive isomorphisms) within the bound fail loudly.
PeriodicAlgebra periodify(AlgebraPtr base, const AlgElement& kappa,
                          std::pair<int, int> weight_window,
                          std::pair<int, int> degree_window, int bound = 8);

} // namespace dgbar

#endif
