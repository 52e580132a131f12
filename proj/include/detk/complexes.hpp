#pragma once

// Chain complexes of graded free modules: the generalized Koszul complexes
// C_i(phi), the spliced family D_i(phi), Betti tables, Hilbert data,
// minimization and dualization-with-twist.
//
// Basis conventions (shared with cone building; see modules.hpp for the sign
// table): position q of C_i(phi) is Wedge^q F (x) S_{i-q} G with the exterior
// factor outer (row-major); the tail position i+1+k of D_i(phi) is
// Wedge^{t+i+k} F (x) S_k G^* (x) Wedge^t G^*, with basis pairs (U, beta),
// U an increasing tuple, beta an exponent vector, again tuple-major.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "detk/modules.hpp"

namespace detk::complexes {

using modules::GradedFreeModule;
using modules::GradedMap;
using rings::Polynomial;
using rings::RingPtr;

// Homologically indexed family term(lo)..term(hi) with differentials
// d_i: term(i) -> term(i-1). d compose d = 0 is enforced by validate(),
// which every builder in this module calls.
struct ChainComplex {
    RingPtr ring;
    int lo = 0;
    std::vector<GradedFreeModule> terms;  // terms[k] sits at position lo+k
    std::vector<GradedMap> diffs;         // diffs[k]: terms[k+1] -> terms[k]
    std::vector<std::string> notes;       // advisory flags, e.g. "conditional: ..."

    int hi() const { return lo + int(terms.size()) - 1; }
    const GradedFreeModule& term(int i) const;
    const GradedMap& diff(int i) const;  // the map leaving position i (lo < i <= hi)
    void validate() const;               // throws unless d compose d == 0 everywhere
    std::string to_string() const;       // "R(-3)^2 -> R(-2)^3 -> R(0)"
};

// Betti numbers: (homological index i, internal degree j) -> multiplicity.
struct BettiTable {
    std::map<std::pair<int, std::int64_t>, std::int64_t> beta;

    bool operator==(const BettiTable& o) const { return beta == o.beta; }
    // Text grid, rows labelled j-i, columns homological index.
    std::string to_grid() const;
};

BettiTable betti(const ChainComplex& cx);

// Hilbert series numerator plus a tabulation of the resulting function.
// series = numerator / (1-z)^{denom_exponent}.
struct HilbertData {
    std::map<std::int64_t, std::int64_t> numerator;  // degree -> coefficient
    int denom_exponent = 0;
    std::vector<std::pair<std::int64_t, std::int64_t>> table;  // (degree, value)

    std::int64_t value_at(std::int64_t d) const;
};

// Alternating sum of the twists of an (assumed acyclic) resolution over a
// ring with denom exponent n+1; tabulated for degrees 0..bound.
HilbertData hilbert_from_resolution(const ChainComplex& cx, int n,
                                    std::int64_t bound = 12);

// ---- C_i / D_i builders ----------------------------------------------------

// Bookkeeping for Wedge^q F (x) S_p G: tuple-major basis (S, alpha).
struct CTermBasis {
    GradedFreeModule mod;
    std::vector<std::vector<int>> tuples;  // increasing q-tuples in [0, N)
    std::vector<std::vector<int>> exps;    // length-t exponent vectors, sum p

    int index(int tuple_idx, int exp_idx) const {
        return tuple_idx * int(exps.size()) + exp_idx;
    }
};
CTermBasis c_term_basis(const GradedMap& phi, int q, int p);

// Bookkeeping for Wedge^w F (x) S_k G^* (x) Wedge^t G^*: basis (U, beta) with
// twist sum_{j in U} a_j - beta.b - sum(b), tuple-major.
struct TailBasis {
    GradedFreeModule mod;
    std::vector<std::vector<int>> tuples;  // increasing w-tuples in [0, N)
    std::vector<std::vector<int>> exps;    // length-t exponent vectors, sum k

    int index(int tuple_idx, int exp_idx) const {
        return tuple_idx * int(exps.size()) + exp_idx;
    }
};
TailBasis tail_basis(const GradedMap& phi, int wedge_size, int k);

// Determinant of the submatrix of phi on `rows` x `cols`.
Polynomial submatrix_det(const GradedMap& phi, const std::vector<int>& rows,
                         const std::vector<int>& cols);

// d: Wedge^q F (x) S_p G -> Wedge^{q-1} F (x) S_{p+1} G,
// y_S (x) x^alpha |-> sum_{m, j in S} (-1)^{pos(j,S)} phi[m][j] y_{S-j} (x) x^{alpha+e_m}.
GradedMap koszul_differential(int p, int q, const GradedMap& phi);

// Tail differential at source size (wedge w, S_k), k >= 1:
// e_{U,beta} |-> (-1)^{N-w} sum_{m: beta_m>0, j in U}
//                 (-1)^{pos(j,U)} phi[m][j] e_{U-j, beta-e_m}.
GradedMap tail_differential(const GradedMap& phi, int wedge_size, int k);

// Splice eps_i: Wedge^{t+i} F (x) Wedge^t G^* -> Wedge^i F,
// e_U |-> sum_{T subset U, |T|=t} sgn(T, U-T) det(phi_T) y_{U-T}.
GradedMap splice_map(int i, const GradedMap& phi);

// C_i(phi): positions 0..i, position q = Wedge^q F (x) S_{i-q} G.
ChainComplex build_C(int i, const GradedMap& phi);

// D_i(phi): C-part at positions 0..i, splice at i+1, tail up to position c.
// i = -1 gives the pure tail; i >= c returns C_i (flagged "conditional" for
// i > c). Validated at build time.
ChainComplex build_D(int i, const GradedMap& phi);

// ---- transforms ------------------------------------------------------------

// Cancel unit (nonzero constant) entries by row/column elimination until
// every differential has entries in the maximal ideal. Pivots on the lowest
// (differential, row, column) for reproducibility. Quasi-isomorphism.
ChainComplex minimize(ChainComplex cx);

// R-dual with positions reversed in place (new index = lo+hi-old) and every
// twist w replaced by `twist` - w.
ChainComplex dualize_shift(const ChainComplex& cx, std::int64_t twist);

// ---- randomized exactness --------------------------------------------------

struct ExactnessReport {
    bool passed = false;
    int points = 0;
    std::uint64_t seed = 0;
    std::uint32_t prime = 0;
    std::string detail;  // first failure, if any

    std::string label() const;  // "randomized(k points, field F_p, seed s)"
};

// At each sampled point x (uniform, never the origin): every interior
// position k must satisfy rank d_k(x) + rank d_{k+1}(x) = rank term_k, and
// the left end must have full column rank. Prime fields only.
ExactnessReport randomized_exactness(const ChainComplex& cx, int npoints,
                                     std::uint64_t seed);

}  // namespace detk::complexes
