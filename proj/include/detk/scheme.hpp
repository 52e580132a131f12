#pragma once

// Determinantal input data: degree matrices, homogeneous t x (t+c-1) matrices
// (generic-random or explicit), their maximal/submaximal minors, and the
// closed-form invariants attached to the shape (codimensions, degree in the
// linear case, the twist ell = sum(a) - sum(b)).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "detk/modules.hpp"
#include "detk/poly.hpp"

namespace detk::schemes {

using rings::CoeffField;
using rings::FieldElem;
using rings::Polynomial;
using rings::RingPtr;

// Shape data of a t x (t+c-1) homogeneous matrix over R = k[x_0..x_n]:
// column degrees a_j, row degrees b_i, entry degrees d_ij = a_j - b_i.
// Both degree lists are kept ascending.
struct DegreeMatrix {
    int t = 0;
    int c = 0;
    int n = 0;
    std::vector<std::int64_t> a;  // size t+c-1, ascending
    std::vector<std::int64_t> b;  // size t, ascending
    // When set, every entry degree must be strictly positive.
    bool positive_entries = false;

    int ncols() const { return t + c - 1; }
    std::int64_t entry_degree(int i, int j) const { return a[j] - b[i]; }
    std::int64_t ell() const;
    void validate() const;  // throws on any violated shape invariant
};

DegreeMatrix make_degree_matrix(int t, int c, int n, std::vector<std::int64_t> a,
                                std::vector<std::int64_t> b,
                                bool positive_entries = false);

// Build the shape from a grid of entry degrees d_ij (t rows, t+c-1 columns).
// The grid must be rank-one consistent (rows differ by constants); row/column
// degrees are normalized so that min(b) = 0. Throws with the offending row
// and column named otherwise.
DegreeMatrix degree_matrix_from_grid(const std::vector<std::vector<std::int64_t>>& grid,
                                     int n, bool positive_entries = false);

// A determinantal scheme: the matrix as a graded map phi: F -> G with
// F = (+)R(-a_j), G = (+)R(-b_i), plus its maximal minors in lexicographic
// column-subset order. Immutable after build.
struct DetScheme {
    RingPtr ring;  // k[x_0..x_n]
    DegreeMatrix degrees;
    modules::GradedMap phi;
    std::vector<Polynomial> minor_ideal_gens;  // binom(t+c-1, t) of them
    std::int64_t ell = 0;
    bool minimal = true;  // no nonzero constant entries
    std::string mode;     // "generic(seed=N)" or "explicit"

    const Polynomial& entry(int i, int j) const { return phi.at(i, j); }
};

struct GenericRandom {
    std::uint64_t seed = 0;
};
struct ExplicitEntries {
    // t rows of t+c-1 polynomial strings; "0" (or "") marks a zero entry.
    std::vector<std::vector<std::string>> rows;
};
struct PolynomialEntries {
    // t rows of t+c-1 already-built polynomials over the target ring; zero
    // polynomials mark zero entries.
    std::vector<std::vector<Polynomial>> rows;
    std::string tag = "polynomial";  // recorded as the scheme's build mode
};

// Generic mode: each entry with d_ij >= 1 is a dense pseudorandom form of
// degree d_ij over a prime field (entries with d_ij <= 0 are zero, keeping
// the matrix minimal). Explicit mode: entries are parsed and degree-checked
// against d_ij, with the offending row/column named on mismatch. Both check
// minimality (no nonzero constant entry) and record it; when
// `demand_minimal` is set a non-minimal matrix is an error.
DetScheme build_matrix(const RingPtr& ring, const DegreeMatrix& degrees,
                       const GenericRandom& mode, bool demand_minimal = true);
DetScheme build_matrix(const RingPtr& ring, const DegreeMatrix& degrees,
                       const ExplicitEntries& mode, bool demand_minimal = true);
DetScheme build_matrix(const RingPtr& ring, const DegreeMatrix& degrees,
                       const PolynomialEntries& mode, bool demand_minimal = true);
// Convenience: ring built from the field as k[x_0..x_n].
DetScheme build_matrix(const CoeffField& field, const DegreeMatrix& degrees,
                       const GenericRandom& mode, bool demand_minimal = true);
DetScheme build_matrix(const CoeffField& field, const DegreeMatrix& degrees,
                       const ExplicitEntries& mode, bool demand_minimal = true);

// Minor of the submatrix on `rows` x `cols` (both ascending index tuples),
// by memoized Laplace expansion. Exposed for cross-checking.
Polynomial minor_of(const DetScheme& s, const std::vector<int>& rows,
                    const std::vector<int>& cols);

// All (t-1) x (t-1) minors, row tuples outer / column tuples inner, both in
// lexicographic order. Requires t >= 2.
std::vector<Polynomial> submaximal_minors(const DetScheme& s);

struct ExpectedInvariants {
    int codim_I = 0;          // = c
    int codim_J_generic = 0;  // = min(2(c+1), n+1)
    std::optional<std::int64_t> deg_linear;  // binom(t+c-1, c), linear case only
    std::int64_t ell = 0;
};
ExpectedInvariants expected_invariants(const DegreeMatrix& degrees);

// Which ideal's vanishing locus to avoid when sampling points.
enum class Locus { maximal_minors, submaximal_minors };

struct PointSearch {
    bool found = false;
    std::vector<FieldElem> point;  // n+1 coordinates when found
    int trials_used = 0;
};

// Rejection-sample points of F_p^{n+1} until every generator of the chosen
// ideal is nonzero at the point. Failure after `trials` attempts is a value,
// not an error. Prime fields only.
PointSearch random_point_on_complement(const DetScheme& s, Locus which, int trials,
                                       std::uint64_t seed);

}  // namespace detk::schemes
