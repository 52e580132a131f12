// Bridges a determinantal scheme to the strand engine: the graded modules
// attached to the matrix (the cokernel M, its symmetric powers, the
// coordinate ring, the conormal module I/I², the canonical module, the dual
// Hom(M, A)) as presented modules over R or A = R/I, plus the sampled depth
// gate, the simplicity verdict, the default degree window, and hyperplane
// restriction to one fewer variable.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "detk/scheme.hpp"
#include "detk/strands.hpp"

namespace detk::schemes {

using strands::BasePtr;
using strands::PresentedModule;
using strands::StrandPtr;

// R = k[x_0..x_n] and A = R/I as strand bases. Both builders share the
// scheme's ring object, so degreewise data is memoized per base instance.
BasePtr base_R(const DetScheme& s);
BasePtr base_A(const DetScheme& s);

// The cokernel M of the matrix, presented by the matrix itself.
PresentedModule cokernel_module(const DetScheme& s, BasePtr base);

// The coordinate ring A as a module: over R, the row of maximal minors;
// over A itself, free of rank one.
PresentedModule coordinate_ring_module(const DetScheme& s, BasePtr base);

// The i-th symmetric power of M (i = 0 gives the coordinate ring), presented
// by the first differential of the Koszul-type complex attached to the
// matrix.
PresentedModule sym_power_module(const DetScheme& s, int i, BasePtr base);

// The ideal I of maximal minors as an R-module (generators = the minors,
// relations = their first syzygies). Free base only; requires every maximal
// minor to be nonzero.
PresentedModule ideal_module(const DetScheme& s, BasePtr base);

// The conormal module I/I²: over A, the syzygies of the minors; over R, the
// same columns plus one column g·e_j per minor g and generator j (the ideal
// must kill the generators). Requires every maximal minor to be nonzero.
PresentedModule conormal_module(const DetScheme& s, BasePtr base);

// The canonical module of A, presented by the dual of the tail of the
// minor-resolution, twisted so its grading is the canonical one.
PresentedModule canonical_module(const DetScheme& s, BasePtr base);

// Hom(M, A) as a strand module: the kernel of the transposed matrix over A.
// Quotient base only (over R the transpose is injective).
StrandPtr dual_module_strand(const DetScheme& s, BasePtr base);

// Default degree window for strand scans on this scheme:
// 2 * (largest twist in the longest attached complex) + c, from the degree
// data alone.
std::int64_t default_strand_bound(const DetScheme& s);

// ---- sampled depth gate -----------------------------------------------------

// Evidence that depth_J(A) >= required, where J is the submaximal-minor
// ideal: the closed-form expected value for a general matrix of this shape,
// plus a random-point check that the submaximal locus is proper. Recorded
// evidence, never a proof.
struct DepthGate {
    int required = 0;
    int expected = 0;   // min(2(c+1), n+1) - c for a general matrix
    bool formula_ok = false;
    bool sampled_ok = false;
    int trials_used = 0;
    std::string evidence;

    bool passed() const { return formula_ok && sampled_ok; }
};
DepthGate depth_J_gate(const DetScheme& s, int required, std::uint64_t seed,
                       int trials = 400);

// ---- simplicity -------------------------------------------------------------

// Verdict on the endomorphisms of the normal module: the degree gate
// max(first syzygy degrees) < 2 * min(generator degrees of I) read off the
// minimized minor-resolution, and the computed dimension of the degree-0
// self-homs of the conormal module (1 = simple). The self-hom dimension of
// the twisted normal module is twist-independent, so `twist_index` only
// labels the report.
struct SimplicityReport {
    int twist_index = 0;
    std::vector<std::int64_t> n1;  // generator degrees of I
    std::vector<std::int64_t> n2;  // first syzygy degrees
    bool gate_pass = false;
    bool linear_auto = false;  // all entries linear and t >= 2: gate automatic
    int hom_dim = -1;          // dim of degree-0 Hom(I/I², I/I²)
    bool simple = false;
    std::string notes;
};
SimplicityReport simplicity_check(const DetScheme& s, int twist_index = 0);

// Cross-check: dim of the degree-0 self-homs of the twisted normal module
// Hom(I/I², S_iM) itself, 0 <= i <= c-1, with the presentation of the normal
// module recovered from its strands inside the given windows.
int normal_module_self_hom_dim(const DetScheme& s, int i, std::int64_t gen_bound,
                               std::int64_t rel_bound);

// ---- hyperplane restriction -------------------------------------------------

struct Restriction {
    DetScheme scheme;                // same shape, one fewer variable
    std::vector<Polynomial> images;  // substitution used, indexed by variable
    int resamples = 0;               // degenerate draws discarded
};

// Substitute the last variable by a random linear form in the others and
// rebuild the scheme over k[x_0..x_{n-1}]. Degenerate sections (non-minimal
// matrix, a vanishing maximal minor, or an empty minor-complement) are
// resampled, with the count reported. Requires n >= c+1 and a prime field.
Restriction hyperplane_restrict(const DetScheme& s, std::uint64_t seed,
                                int max_resamples = 32);

}  // namespace detk::schemes
