#ifndef DGBAR_ALGEBRA_HPP
#define DGBAR_ALGEBRA_HPP

#include "dgbar/complex.hpp"
#include "dgbar/sparse.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace dgbar {

struct Generator {
    std::string name;
    int degree = 0;
    int weight = 0;
};

// Free graded-commutative monomial over the generator list: sorted
// (generator index, exponent) factors, exponent >= 1, odd generators at most
// once. The empty monomial is the unit.
struct Monomial {
    std::vector<std::pair<int, int>> factors;

    bool is_unit() const { return factors.empty(); }
    int length() const;
    auto operator<=>(const Monomial&) const = default;
};

// Sparse polynomial in centered generators.
using FreeElem = std::map<Monomial, Rat>;

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> violations;
    void fail(std::string msg) {
        ok = false;
        violations.push_back(std::move(msg));
    }
};

// Augmented graded-commutative dg-algebra over Q in one of two presentations.
//
// FreeGC stores generators sorted by name with differentials as polynomials;
// generators with nonzero augmentation (possible only in degree 0, weight 0)
// are recentered internally so that every non-unit monomial lies in ker t.
//
// StructConst stores a finite ordered basis containing the unit, a full
// multiplication table, a differential matrix and an augmentation vector.
class Algebra {
public:
    enum class Kind { FreeGC, StructConst };

    struct SCElem {
        std::string name;
        int degree = 0;
        int weight = 0;
    };

    static Algebra free_gc(std::string name, std::vector<Generator> gens,
                           std::map<std::string, FreeElem> diff_by_name,
                           std::map<std::string, Rat> aug_by_name, bool mixed_tate);
    static Algebra struct_const(std::string name, std::vector<SCElem> basis, int unit_index,
                                std::map<std::pair<int, int>, SparseVec> mul,
                                std::map<int, SparseVec> diff, std::vector<Rat> aug,
                                bool mixed_tate);

    Kind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    bool mixed_tate() const { return mixed_tate_; }

    const std::vector<Generator>& gens() const { return gens_; }
    const FreeElem& gen_diff(int g) const { return gen_diff_[g]; }
    // The user's presentation of d(g): stored differentials are recentered
    // (g -> g - aug(g)); this undoes the substitution for serialization.
    FreeElem gen_diff_presented(int g) const;
    const Rat& gen_aug(int g) const { return gen_aug_[g]; }
    int gen_index(const std::string& name) const; // -1 if absent

    const std::vector<SCElem>& sc_basis() const { return sc_; }
    int sc_unit() const { return unit_; }
    const SparseVec& sc_mul(int i, int j) const { return sc_mul_[i][j]; }
    const SparseVec& sc_diff(int i) const { return sc_diff_[i]; }
    const Rat& sc_aug(int i) const { return sc_aug_[i]; }
    int sc_index(const std::string& name) const;

    // Degree/weight of homogeneous pieces.
    int mono_degree(const Monomial& m) const;
    int mono_weight(const Monomial& m) const;

    // FreeGC element operations (inputs/outputs centered).
    static FreeElem poly_scale(const FreeElem& a, const Rat& c);
    static FreeElem poly_add(FreeElem a, const FreeElem& b);
    FreeElem poly_mul(const FreeElem& a, const FreeElem& b) const;
    FreeElem poly_d(const FreeElem& a) const;
    Rat poly_aug(const FreeElem& a) const; // coefficient of the unit monomial
    std::optional<std::pair<int, int>> poly_bidegree(const FreeElem& a) const; // (wt,deg) if homogeneous

    // Multiply a single pair of monomials; zero when an odd generator squares.
    std::pair<Rat, Monomial> mono_mul(const Monomial& a, const Monomial& b) const;

    // StructConst element operations.
    SparseVec vec_mul(const SparseVec& a, const SparseVec& b) const;
    SparseVec vec_d(const SparseVec& a) const;
    Rat vec_aug(const SparseVec& a) const;

    // Graded commutativity, Leibniz, d^2 = 0, augmentation multiplicativity and
    // weight additivity (plus full associativity for StructConst).
    ValidationReport validate() const;

    // Ordered basis of the augmentation ideal in one bidegree. For FreeGC
    // this enumerates monomials; requires positive weights on all generators
    // unless a monomial length cap is supplied (infinite bases are refused,
    // never truncated). Results use the graded-lex order (weight, degree,
    // name sequence).
    std::vector<Monomial> basis_in_bidegree(int weight, int degree,
                                            std::optional<int> length_cap = std::nullopt) const;

    // Enumerate aug-ideal monomials for every degree at a fixed weight
    // (weighted FreeGC; weight >= 1). Used by the letter system.
    std::vector<Monomial> monomials_of_weight(int weight) const;

    // Unweighted FreeGC: monomials of one degree; requires all generator
    // degrees strictly positive or all strictly negative.
    std::vector<Monomial> monomials_of_degree(int degree) const;

    bool freegc_degreewise_finite() const; // unweighted finiteness condition

    std::string mono_str(const Monomial& m) const;
    std::string poly_str(const FreeElem& e) const;
    std::string vec_str(const SparseVec& v) const;

    // Bounds used for letter enumeration.
    int min_gen_degree() const;
    int max_gen_degree() const;

private:
    Kind kind_ = Kind::FreeGC;
    std::string name_;
    bool mixed_tate_ = false;

    std::vector<Generator> gens_;
    std::vector<FreeElem> gen_diff_;
    std::vector<Rat> gen_aug_;

    std::vector<SCElem> sc_;
    int unit_ = -1;
    std::vector<std::vector<SparseVec>> sc_mul_;
    std::vector<SparseVec> sc_diff_;
    std::vector<Rat> sc_aug_;

    void enumerate(std::vector<Monomial>& out, Monomial& cur, int next_gen,
                   std::optional<int> want_weight, std::optional<int> want_degree,
                   int cur_weight, int cur_degree, int cur_len,
                   std::optional<int> length_cap) const;
};

using AlgebraPtr = std::shared_ptr<const Algebra>;

// Canonical enumeration of augmentation-ideal letters for a bar run, with
// precomputed differential and product tables over letter ids. Letters are
// ordered by (weight, degree, payload); ids are positions in that order, so
// identical runs produce identical ids regardless of scheduling.
class LetterSystem {
public:
    struct Letter {
        int degree;
        int weight;
        Monomial mono;    // FreeGC payload
        int sc_index = -1; // StructConst payload
    };

    // Weighted mode: all letters of weight 1..weight_bound (requires the
    // augmentation ideal concentrated in weights >= 1).
    static LetterSystem weighted(AlgebraPtr a, int weight_bound);
    // Unweighted mode: all letters with suspended degree in [slo, shi].
    static LetterSystem unweighted(AlgebraPtr a, int susp_lo, int susp_hi);

    const Algebra& algebra() const { return *alg_; }
    AlgebraPtr algebra_ptr() const { return alg_; }
    int count() const { return static_cast<int>(letters_.size()); }
    const Letter& letter(int id) const { return letters_[id]; }
    int degree(int id) const { return letters_[id].degree; }
    int weight(int id) const { return letters_[id].weight; }
    int susp(int id) const { return letters_[id].degree - 1; }

    // d(letter) as a letter combination (same weight, degree + 1); letters
    // outside the enumerated range are rejected loudly.
    const SparseVec& d(int id) const { return diff_[id]; }
    // Product of two letters (weights add, degrees add).
    const SparseVec& mul(int i, int j) const;

    std::string display(int id) const;

private:
    AlgebraPtr alg_;
    bool weighted_mode_ = true;
    int weight_bound_ = 0;
    int susp_lo_ = 0, susp_hi_ = 0;

    std::vector<Letter> letters_;
    std::map<Monomial, int> mono_id_;
    std::vector<int> sc_id_; // sc index -> letter id (or -1)

    std::vector<SparseVec> diff_;
    std::map<std::pair<int, int>, SparseVec> mul_;
    SparseVec empty_;

    int id_of_mono(const Monomial& m) const; // -1 if outside range
    SparseVec to_letters(const FreeElem& e) const;
    SparseVec to_letters_sc(const SparseVec& centered) const;
    void build_tables(bool in_range_required);
};

} // namespace dgbar

#endif
