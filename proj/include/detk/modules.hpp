// Graded free modules, degree-checked polynomial matrices, and the
// multilinear constructions (dual, tensor, exterior, symmetric) every complex
// is assembled from.
//
// ---- Basis and sign conventions (fixed once, used everywhere) -------------
//  * Exterior power Λ^q: basis = strictly increasing index tuples, lex order.
//      wedge insert:   y_j ∧ y_S = (-1)^{pos(j,S)} y_{S∪j}, zero if j ∈ S,
//      contraction:    y_j* ⌟ y_S = (-1)^{pos(j,S)} y_{S\j}, zero if j ∉ S,
//    where pos(j,S) = #{l ∈ S : l < j}.
//  * Symmetric power S_p: basis = exponent vectors, lex-descending order
//    ((2,0) before (1,1) before (0,2)).
//  * Tensor product: row-major, left factor outer.
//  * shuffle_sign(S,T) = (-1)^{#{(a,b) ∈ S×T : a > b}} is the sign moving the
//    concatenation S,T into sorted order (S, T disjoint sorted tuples).
// A map R(-a) -> R(-b) has entry degree a - b (source twist minus target).
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "detk/linalg.hpp"
#include "detk/poly.hpp"

namespace detk::modules {

using rings::CoeffField;
using rings::FieldElem;
using rings::Polynomial;
using rings::RingPtr;

struct GradedFreeModule {
    std::vector<std::int64_t> twists;  // module = ⊕_j R(-twists[j])
    std::vector<std::string> labels;   // optional basis labels (empty or rank-sized)

    int rank() const { return int(twists.size()); }
    // M(v): R(-a)(v) = R(-(a - v)).
    GradedFreeModule shifted(std::int64_t v) const;
    std::string to_string() const;  // e.g. "R(-2)^3 ++ R(-3)^2", "0"

    // Identity is the ordered twist list; labels are printing sugar.
    friend bool operator==(const GradedFreeModule& a, const GradedFreeModule& b) {
        return a.twists == b.twists;
    }
};

GradedFreeModule free_module(std::vector<std::int64_t> twists);
GradedFreeModule dual(const GradedFreeModule& m);
GradedFreeModule direct_sum(const GradedFreeModule& a, const GradedFreeModule& b);
GradedFreeModule tensor(const GradedFreeModule& a, const GradedFreeModule& b);

// ---- index combinatorics --------------------------------------------------

// All strictly increasing q-tuples from {0..n-1}, lex order.
std::vector<std::vector<int>> increasing_tuples(int n, int q);
// All exponent vectors of length n summing to p, lex-descending.
std::vector<std::vector<int>> exponent_vectors(int n, int p);

int pos_in_tuple(int j, const std::vector<int>& sorted_tuple);   // #{l in S : l < j}
bool tuple_contains(const std::vector<int>& sorted_tuple, int j);
int shuffle_sign(const std::vector<int>& s, const std::vector<int>& t);  // +1 / -1
// Index of `tup` within increasing_tuples(n, q) (lex rank); throws if absent.
int tuple_index(int n, const std::vector<int>& tup);
// Index of exponent vector within exponent_vectors(n, p).
int exponent_index(int n, const std::vector<int>& exps);

// Exterior/symmetric powers keep their index semantics next to the module.
struct PowerBasis {
    GradedFreeModule mod;
    std::vector<std::vector<int>> index;  // tuples or exponent vectors
};

PowerBasis exterior_power(const GradedFreeModule& m, int q);
PowerBasis symmetric_power(const GradedFreeModule& m, int p);

// ---- graded maps ----------------------------------------------------------

// target.rank x source.rank polynomial matrix; every nonzero entry (i,j) is
// homogeneous of degree source.twists[j] - target.twists[i] (checked).
class GradedMap {
  public:
    GradedMap(RingPtr ring, GradedFreeModule source, GradedFreeModule target);
    static GradedMap identity(const RingPtr& ring, const GradedFreeModule& m);

    const RingPtr& ring() const { return ring_; }
    const GradedFreeModule& source() const { return source_; }
    const GradedFreeModule& target() const { return target_; }
    int rows() const { return target_.rank(); }
    int cols() const { return source_.rank(); }

    const Polynomial& at(int i, int j) const;
    void set(int i, int j, Polynomial p);  // degree-checked
    void add_to(int i, int j, const Polynomial& p);

    bool is_zero() const;
    GradedMap compose(const GradedMap& inner) const;  // this ∘ inner
    GradedMap plus(const GradedMap& o) const;
    GradedMap minus(const GradedMap& o) const;
    GradedMap negated() const;
    GradedMap scaled(const FieldElem& c) const;
    // f*: dual(target) -> dual(source), the transpose.
    GradedMap dual_map() const;
    la::DenseMat evaluate(const std::vector<FieldElem>& point) const;
    bool equals(const GradedMap& o) const;

    std::string to_string() const;

  private:
    void check_entry(int i, int j, const Polynomial& p) const;

    RingPtr ring_;
    GradedFreeModule source_, target_;
    std::vector<Polynomial> entries_;  // row-major
};

GradedMap tensor_map(const GradedMap& f, const GradedMap& g);
// Λ^q f between exterior_power bases (entries = q-minors of f).
GradedMap exterior_power_map(const GradedMap& f, int q);
// S_p f between symmetric_power bases.
GradedMap symmetric_power_map(const GradedMap& f, int p);

// Determinant of the square polynomial matrix {entries(i,j)} by Laplace
// expansion along the first row. Homogeneous inputs only (as everywhere).
Polynomial poly_det(const RingPtr& ring, int n,
                    const std::vector<std::vector<Polynomial>>& entries);

// ---- wedge / contraction on elements -------------------------------------
// An element of Λ^q(rank-n module) is a coefficient vector over
// increasing_tuples(n, q) with Polynomial coordinates.

std::vector<Polynomial> wedge_multiply(const RingPtr& ring, int n, int q, int j,
                                       const std::vector<Polynomial>& f);
std::vector<Polynomial> contraction(const RingPtr& ring, int n, int q, int j,
                                    const std::vector<Polynomial>& f);

}  // namespace detk::modules
