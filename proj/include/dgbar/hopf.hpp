#ifndef DGBAR_HOPF_HPP
#define DGBAR_HOPF_HPP

#include "dgbar/bar.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dgbar {

// Classical commutative Hopf algebra presented by structure constants on a
// finite (possibly weight-truncated) basis. Products and coproducts whose
// weight leaves the truncation bound are absent, and identities are only
// asserted where every term is inside the bound.
struct HopfAlgebra {
    std::string name;
    bool truncated = false;
    int weight_bound = 0; // meaningful when truncated

    struct BasisElem {
        int weight = 0;
        std::string label;
    };
    std::vector<BasisElem> basis;
    int unit = -1;

    std::map<std::pair<int, int>, SparseVec> mul; // key within bound only
    std::map<int, std::vector<std::tuple<int, int, Rat>>> comul;
    std::vector<Rat> counit;
    std::map<int, SparseVec> antipode;

    int dim() const { return static_cast<int>(basis.size()); }
    bool mul_known(int i, int j) const { return mul.count({i, j}) != 0; }
    const SparseVec& product(int i, int j) const;
    SparseVec apply_antipode(const SparseVec& v) const;
};

struct HopfReport {
    bool ok = true;
    std::vector<std::string> violations;
    int identities_checked = 0;
};

// Exact matrix identities on the (possibly truncated) range: commutativity,
// associativity, unit/counit laws, coassociativity, bialgebra compatibility,
// antipode convolution, weight balance.
HopfReport hopf_validate(const HopfAlgebra& h);

// H^0 of the bar Hopf dg-algebra as a classical Hopf algebra: basis are the
// deterministic cycle representatives per weight <= W; structure constants by
// multiplying/coproducting representatives and reducing modulo boundaries.
HopfAlgebra coarse_moduli(const BarComplex& b, int weight_bound);

// Function Hopf algebra of a finite group given by its multiplication table
// (indices); throws MathError with a witness if the table is not a group.
HopfAlgebra finite_group_hopf(const std::vector<std::vector<int>>& table);

struct GroupPoints {
    bool refused = false;
    std::string refusal;
    int variety_dimension = 0; // reported on refusal for truncated inputs
    // each point: images of the Hopf basis in the target's coordinates
    std::vector<std::vector<Rat>> points;
    std::vector<std::vector<int>> law; // convolution table, indices into points
    int identity = -1;
    std::vector<int> inverse;
};

// All algebra maps h -> target, target a StructConst commutative algebra
// splitting as a finite product of Q (this includes Q itself); the
// convolution group law is tabulated and verified. Weight-truncated inputs
// with positive-dimensional primitive space are refused with the dimension.
GroupPoints group_points(const HopfAlgebra& h, AlgebraPtr target);

// dim ker(counit) / (ker counit)^2 over the known products.
int primitive_dimension(const HopfAlgebra& h);

} // namespace dgbar

#endif
