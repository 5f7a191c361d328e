#ifndef DGBAR_BAR_HPP
#define DGBAR_BAR_HPP

#include "dgbar/algebra.hpp"
#include "dgbar/complex.hpp"

#include <map>
#include <optional>
#include <vector>

namespace dgbar {

// A reduced bar word [a_1|...|a_n] over augmentation-ideal letters.
// Bar degree is sum of suspended letter degrees (|a_i| - 1); weight adds.
struct BarWord {
    std::vector<int> letters;

    bool empty() const { return letters.empty(); }
    int length() const { return static_cast<int>(letters.size()); }
    auto operator<=>(const BarWord&) const = default;
};

int word_degree(const LetterSystem& ls, const BarWord& w);
int word_weight(const LetterSystem& ls, const BarWord& w);

// Sparse combination of bar words.
using WordSum = std::map<BarWord, Rat>;
// Sparse combination of word pairs (for coproduct identities).
using WordPairSum = std::map<std::pair<BarWord, BarWord>, Rat>;

void add_term(WordSum& s, const BarWord& w, const Rat& c);
WordSum sum_scale(const WordSum& s, const Rat& c);
WordSum sum_add(WordSum a, const WordSum& b);

// d = d_int + d_mul with suspension Koszul signs:
//   d_int[a1|..|an] = -sum_i (-1)^{e_{i-1}} [a1|..|da_i|..|an]
//   d_mul[a1|..|an] =  sum_i (-1)^{e_i}     [a1|..|a_i a_{i+1}|..|an]
// where e_i is the suspended degree of the length-i prefix.
WordSum bar_d(const LetterSystem& ls, const BarWord& w);
WordSum bar_d(const LetterSystem& ls, const WordSum& s);

// Shuffle product: signed interleavings, Koszul signs on suspended degrees.
WordSum shuffle_product(const LetterSystem& ls, const BarWord& u, const BarWord& v);
WordSum shuffle_product(const LetterSystem& ls, const WordSum& u, const WordSum& v);

// Deconcatenation coproduct (no signs) and its counit.
WordPairSum deconcatenate(const BarWord& u);

// Antipode: signed reversal.
WordSum antipode(const LetterSystem& ls, const BarWord& u);
WordSum antipode(const LetterSystem& ls, const WordSum& u);

struct BarOptions {
    std::optional<int> weight_bound;            // weighted (equivariant) mode
    std::optional<int> wordlength_cap;          // unweighted mode
    std::optional<std::pair<int, int>> window;  // degree window (unweighted)
    int jobs = 1;
};

struct TableRow {
    int weight = 0;
    int degree = 0;
    int dim = 0;
    bool stable = true; // cap-stability (always true in weighted mode)
    auto operator<=>(const TableRow&) const = default;
};
using Table = std::vector<TableRow>; // sorted by (weight, degree)

// The reduced bar complex; weight-graded when built in weighted mode
// (one exactly-materialized Complex per weight), a single capped piece
// otherwise.
class BarComplex {
public:
    bool weighted() const { return weighted_; }
    int weight_bound() const { return weight_bound_; }
    int cap() const { return cap_; }
    int window_lo() const { return lo_; }
    int window_hi() const { return hi_; }
    const LetterSystem& letters() const { return *letters_; }

    std::vector<int> weights() const; // weighted: 0..W; unweighted: {0}
    const Complex& piece(int w) const;
    const std::vector<BarWord>& words(int w, int degree) const;
    int word_index(int w, int degree, const BarWord& word) const; // -1 if absent

    // Honesty flags for capped runs: a degree's cohomology is cap-stable when
    // no word beyond the cap/window can touch degrees n-1..n+1.
    bool basis_complete(int degree) const;
    bool degree_stable(int degree) const;

    Table cohomology_table(int jobs = 1) const;

    // internal construction surface
    friend BarComplex bar_complex(AlgebraPtr a, const BarOptions& opt);

private:
    bool weighted_ = true;
    int weight_bound_ = 0;
    int cap_ = 0;
    int lo_ = 0, hi_ = -1;       // unweighted window
    int min_susp_ = 0, max_susp_ = 0;
    bool has_letters_ = false;
    std::shared_ptr<LetterSystem> letters_;
    std::map<int, Complex> pieces_;                          // weight -> complex
    std::map<std::pair<int, int>, std::vector<BarWord>> words_; // (weight, degree)
    static const std::vector<BarWord> kNoWords;
};

// Validates the algebra, then materializes the reduced bar complex.
BarComplex bar_complex(AlgebraPtr a, const BarOptions& opt);

// Level n of the Cech nerve model: the n-fold tensor power of the bar
// complex (level 0 is the unit). Returns the per-weight complexes and the
// cohomology dimension table.
struct CechLevel {
    std::map<int, Complex> pieces; // weight -> complex (unweighted: key 0)
    Table table;
};
CechLevel cech_level(AlgebraPtr a, int level, const BarOptions& opt);

// Literal comonadic simplicial object, truncated at the given simplicial
// level: the Moore total complex of (T,U)_*(A) (x)_{A(x)A} k, with levels
// n realized as A^{(x)n}. StructConst algebras at oracle scale only.
struct MooreOracle {
    Complex moore;              // levels <= max_level
    Complex normalized;         // quotient by degenerate words
    int max_level = 0;
    // Degrees whose cohomology is unaffected by the level truncation.
    bool degree_honest(int degree) const;
    int min_deg_letter = 0, max_deg_letter = 0;
};
MooreOracle comonadic_oracle(AlgebraPtr a, int max_level);

Table table_of(const std::map<int, Complex>& pieces, int jobs = 1);
Table convolve(const Table& a, const Table& b); // Kunneth convolution of dims

} // namespace dgbar

#endif
