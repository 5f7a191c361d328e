#ifndef DGBAR_COMPLEX_HPP
#define DGBAR_COMPLEX_HPP

#include "dgbar/sparse.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace dgbar {

// Refusals and contract violations raised by the mathematical layers.
class MathError : public std::runtime_error {
public:
    explicit MathError(const std::string& what) : std::runtime_error(what) {}
};

// Structured basis label: a small integer payload under a kind tag, so that
// bases built by tensor/bar/truncation constructions are deterministic and
// reproducible without string parsing. Rendering is context-dependent.
struct BasisLabel {
    enum Kind : std::uint8_t {
        Unit = 0,    // payload: []
        Mono = 1,    // payload: interned letter/monomial id
        Word = 2,    // payload: letter ids, one per bar letter
        Pair = 3,    // payload: [degL, idxL, degR, idxR] into factor bases
        Cycle = 4,   // payload: [degree, ordinal] (kernel-basis element)
        Coset = 5,   // payload: [degree, ordinal] (boundary-complement rep)
        ConeSrc = 6, // payload: [degree, ordinal] (shifted source summand)
        ConeTgt = 7, // payload: [degree, ordinal]
        Gen = 8,     // payload: [ordinal] (fixture / group element / H^0 class)
    };
    Kind kind = Unit;
    std::vector<std::int32_t> path;

    auto operator<=>(const BasisLabel&) const = default;
    std::string str() const;
};

// Cohomologically Z-graded complex over Q with degreewise finite bases and
// differential of degree +1. The window [lo,hi] is the materialized support:
// the complex is genuinely zero outside it, so every operation is total.
class Complex {
public:
    Complex() : lo_(0), hi_(-1) {} // empty window
    Complex(int lo, int hi);

    static Complex unit(); // Q concentrated in degree 0

    int lo() const { return lo_; }
    int hi() const { return hi_; }
    bool window_empty() const { return lo_ > hi_; }

    void set_basis(int n, std::vector<BasisLabel> basis);
    void set_diff(int n, SparseMatrix d); // d: C^n -> C^{n+1}

    int dim(int n) const;
    const std::vector<BasisLabel>& basis(int n) const;
    // Always shaped dim(n+1) x dim(n); implicit zero matrix when unset.
    SparseMatrix diff(int n) const;

    long total_dim() const;

private:
    int lo_, hi_;
    std::map<int, std::vector<BasisLabel>> basis_;
    std::map<int, SparseMatrix> diff_;
    static const std::vector<BasisLabel> kEmpty;
};

struct ComplexReport {
    bool ok = true;
    std::vector<std::string> problems; // one entry per violating degree
};

// Confirms shape consistency and d(n+1) . d(n) = 0 on every degree.
ComplexReport check_complex(const Complex& c);

struct Cohomology {
    int dim = 0;
    std::vector<SparseVec> representatives; // cycles in C^n coordinates
};

// dim ker d^n - rank d^{n-1}, with deterministic echelon representatives.
Cohomology cohomology(const Complex& c, int n);

// Degrees with nonzero cohomology mapped to dimensions.
std::map<int, int> cohomology_table(const Complex& c);

// shift(c,m): basis^n = c.basis^{n+m}, differential scaled by (-1)^m.
Complex shift(const Complex& c, int m);

// Tensor product with Koszul signs: d(x(x)y) = dx(x)y + (-1)^{|x|} x(x)dy.
Complex tensor_product(const Complex& a, const Complex& b);

// Smart truncations: tau_{<=n} replaces degree n by cycles, tau_{>=n}
// replaces degree n by a complement of boundaries.
Complex truncate_leq(const Complex& c, int n);
Complex truncate_geq(const Complex& c, int n);

struct ChainMap {
    Complex source;
    Complex target;
    std::map<int, SparseMatrix> components; // degree -> matrix

    SparseMatrix component(int n) const; // zero matrix when unset
};

// true iff every component square commutes exactly.
bool chain_map_valid(const ChainMap& f, std::string* why = nullptr);

// Mapping cone: C^n = a^{n+1} (+) b^n, d(x,y) = (-d_a x, f(x) + d_b y).
Complex mapping_cone(const ChainMap& f);

bool is_acyclic(const Complex& c);
bool is_quasi_iso(const ChainMap& f);

// Braiding a(x)b -> b(x)a with sign (-1)^{|x||y|}; used by symmetry tests.
ChainMap braiding(const Complex& a, const Complex& b);

long euler_characteristic(const Complex& c);

} // namespace dgbar

#endif
