// Strand (degreewise) snapshots of graded modules over R = k[x_0..x_n] or a
// graded quotient A = R/(g_1..g_s), and the algorithms built on them:
//   * graded pieces of finitely presented modules,
//   * degree-by-degree minimal free resolutions truncated at a degree bound,
//     with projective-dimension / depth reports,
//   * Hom and Ext strand dimensions between modules,
//   * presentations recovered from strand data (generators and relations
//     found inside a degree window).
//
// Everything is exact linear algebra over a prime coefficient field. The
// degree-d piece of a free module ⊕ base(-w_i) is laid out block by block:
// block i carries the monomial basis of R_{d-w_i} (grevlex order) or, over a
// quotient, the coset monomials left over once the ideal strand's echelon has
// claimed its pivots. All per-degree data is memoized.
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "detk/complexes.hpp"
#include "detk/linalg.hpp"
#include "detk/modules.hpp"
#include "detk/poly.hpp"

namespace detk::strands {

using rings::Polynomial;
using rings::RingPtr;

class BaseRing;
using BasePtr = std::shared_ptr<BaseRing>;

// F_p^ambient modulo a spanned subspace: the subspace's echelon plus the
// complementary coordinates, which serve as the quotient's basis.
struct QuotientSpace {
    int ambient = 0;
    la::FpSpan span;
    std::vector<int> coset;     // ambient indices forming the quotient basis
    std::vector<int> coord_of;  // ambient index -> quotient coordinate or -1

    QuotientSpace(std::uint32_t p, int ambient_dim);
    int dim() const { return int(coset.size()); }
    void finalize();  // fill coset/coord_of from the span's pivots
    // Ambient coefficient vector -> quotient coordinates.
    la::SparseVec reduce(const la::SparseVec& v);
};

QuotientSpace make_quotient(std::uint32_t p, int ambient_dim,
                            const std::vector<la::SparseVec>& subspace);

// The coefficient base: the polynomial ring itself, or a graded quotient by a
// homogeneous ideal. Prime coefficient fields only; degree pieces of a
// quotient are represented by coset monomials, memoized per degree.
class BaseRing {
  public:
    static BasePtr polynomial(RingPtr ring);
    static BasePtr quotient(RingPtr ring, std::vector<Polynomial> ideal_gens,
                            std::string name);

    const RingPtr& ring() const { return ring_; }
    bool is_quotient() const { return !ideal_.empty(); }
    const std::vector<Polynomial>& ideal_gens() const { return ideal_; }
    const std::string& name() const { return name_; }
    std::uint32_t prime() const { return prime_; }
    int nvars() const;

    int dim(std::int64_t d);
    // R_d coefficient vector -> base coordinates (identity over the free base).
    la::SparseVec reduce(std::int64_t d, const la::SparseVec& rvec);
    // The monomial representing base coordinate k of degree d.
    rings::Mono rep_mono(std::int64_t d, int k);
    // Encode a homogeneous polynomial of degree d (zero allowed) into base
    // coordinates.
    la::SparseVec encode(const Polynomial& p, std::int64_t d);
    // Base coordinate k of degree d times a nonzero homogeneous polynomial.
    la::SparseVec mult(std::int64_t d, int k, const Polynomial& p);
    la::SparseVec mult_var(std::int64_t d, int k, int var);

  private:
    BaseRing(RingPtr ring, std::vector<Polynomial> ideal, std::string name);
    QuotientSpace& strata(std::int64_t d);

    RingPtr ring_;
    std::vector<Polynomial> ideal_;
    std::string name_;
    std::uint32_t prime_ = 0;
    std::map<std::int64_t, QuotientSpace> memo_;
};

// Degree-d layout of ⊕_i base(-twists[i]).
struct FreeLayout {
    std::vector<int> offsets;  // size rank+1; block i = [offsets[i], offsets[i+1])
    int total() const { return offsets.empty() ? 0 : offsets.back(); }
    int block_dim(int i) const { return offsets[i + 1] - offsets[i]; }
};
FreeLayout layout_at(BaseRing& base, const std::vector<std::int64_t>& twists,
                     std::int64_t d);

// Columns of the degree-d strand of a graded map between free base modules,
// as coefficient vectors over the target layout. Column order is
// generator-major: source generator j, then the base basis of degree
// d - twist_j.
std::vector<la::SparseVec> strand_columns(BaseRing& base, const modules::GradedMap& P,
                                          std::int64_t d);

// v * p for v over the layout of `twists` at degree d.
la::SparseVec free_mult(BaseRing& base, const std::vector<std::int64_t>& twists,
                        std::int64_t d, const la::SparseVec& v, const Polynomial& p);
la::SparseVec free_mult_var(BaseRing& base, const std::vector<std::int64_t>& twists,
                            std::int64_t d, const la::SparseVec& v, int var);

// Polynomial entries (one per block) of a layout coordinate vector at degree
// d over ⊕_i base(-twists[i]). Over a quotient base the entries are the
// representative-monomial lifts.
std::vector<Polynomial> column_polys(BaseRing& base, const std::vector<std::int64_t>& twists,
                                     std::int64_t d, const la::SparseVec& v);

// A finitely presented graded module: coker(pres) with pres mapping
// relations -> generators. Over a quotient base the ideal acts implicitly
// (all strands are taken in quotient coordinates), so relation columns for
// ideal multiples of the generators are never needed there.
struct PresentedModule {
    BasePtr base;
    modules::GradedMap pres;
    std::string name;

    const std::vector<std::int64_t>& gen_twists() const { return pres.target().twists; }
};

PresentedModule presented(BasePtr base, modules::GradedMap pres, std::string name);
PresentedModule free_presented(BasePtr base, std::vector<std::int64_t> twists,
                               std::string name);

// ---- strand modules --------------------------------------------------------

// Exact degree-d snapshots of a graded module: dimensions plus the module
// action on coordinates. Implementations memoize per degree.
class StrandModule {
  public:
    virtual ~StrandModule() = default;
    BaseRing& base() const { return *base_; }
    const BasePtr& base_ptr() const { return base_; }
    const std::string& name() const { return name_; }

    virtual int dim(std::int64_t d) = 0;
    // Multiply the degree-d element with coordinates v by a nonzero
    // homogeneous polynomial; returns coordinates at d + deg p.
    virtual la::SparseVec act(std::int64_t d, const la::SparseVec& v,
                              const Polynomial& p) = 0;
    // A degree below which every piece vanishes (scan start).
    virtual std::int64_t min_degree_hint() = 0;

  protected:
    StrandModule(BasePtr base, std::string name);
    BasePtr base_;
    std::string name_;
};
using StrandPtr = std::shared_ptr<StrandModule>;

// coker(pres) as a strand module.
StrandPtr make_strand(const PresentedModule& m);
// ker(psi) between free base modules as a strand module (e.g. the dual of a
// cokernel, which is a kernel of the transposed map over the quotient).
StrandPtr make_kernel_strand(BasePtr base, modules::GradedMap psi, std::string name);

struct StrandPiece {
    std::int64_t degree = 0;
    int dim = 0;
};
StrandPiece graded_piece(StrandModule& m, std::int64_t d);
StrandPiece graded_piece(const PresentedModule& m, std::int64_t d);

// ---- truncated minimal resolutions ----------------------------------------

struct DepthReport {
    std::string name;
    std::int64_t bound = 0;  // degree window used for every syzygy scan
    int pd = -1;             // observed projective dimension (lower bound if censored)
    bool exact_within_bound = false;  // every kernel strand vanished inside the window
    int depth = -1;  // nvars - pd (free base, uncensored only; else -1)
    std::string notes;

    std::string to_string() const;
};

struct TruncatedResolution {
    BasePtr base;
    std::vector<modules::GradedFreeModule> terms;  // F_0, F_1, ...
    std::vector<modules::GradedMap> diffs;         // diffs[k]: F_{k+1} -> F_k
    DepthReport report;

    int length() const { return int(terms.size()) - 1; }
    complexes::BettiTable betti_table() const;
    // Over the free base the differentials compose to zero on the nose and
    // the resolution converts to a validated chain complex; over a quotient
    // the lifted entries compose to zero only modulo the ideal, so this
    // requires a free base.
    complexes::ChainComplex to_chain_complex() const;
};

// Degree-by-degree minimal free resolution of coker(pres), truncated at the
// degree bound: each syzygy module's minimal generators are collected through
// `bound`, and kernels are certified zero only inside that window (the report
// says which). Requires a minimal presentation (no nonzero constant entries).
// Throws if the bound lies below every generator degree.
TruncatedResolution truncated_min_resolution(const PresentedModule& m, std::int64_t bound,
                                             int max_steps = 48);

// The same engine for an arbitrary strand module: generators of the module
// itself are then also found degree by degree.
TruncatedResolution resolve_strand_module(StrandModule& target, std::int64_t bound,
                                          const std::string& name, int max_steps = 48);

// Wrap an existing resolution complex (positions 0..len, already exact) for
// the Hom/Ext machinery.
TruncatedResolution resolution_from_complex(BasePtr base, const complexes::ChainComplex& cx,
                                            std::string name);

// ---- Hom and Ext strands ----------------------------------------------------

// Graded homs of each degree e in [elo, ehi]: a hom is a choice of generator
// images satisfying the presentation's relations — a finite exact linear
// system per degree. Solution coordinates are blocks of m2-coordinates, one
// block per m1 generator.
struct HomStrandResult {
    std::vector<std::int64_t> block_twists;  // m1 generator twists
    std::map<std::int64_t, int> dims;
    std::map<std::int64_t, std::vector<la::SparseVec>> basis;  // when requested
};
HomStrandResult hom_strand(const PresentedModule& m1, StrandModule& m2, std::int64_t elo,
                           std::int64_t ehi, bool with_basis = false);

// dim Ext^a(m1, m2) in each degree of [elo, ehi], as homology of
// Hom(F_., m2) for the given truncated resolution F_. of m1. The resolution
// must reach homological index a+1 (or be complete below it); otherwise this
// throws and names the index that is missing.
std::map<std::int64_t, int> ext_strand(const TruncatedResolution& res, int a,
                                       StrandModule& m2, std::int64_t elo, std::int64_t ehi);

// Ext^a(m1, m2) as a strand module (a subquotient of the Hom(F_a, m2)
// strands), so Ext modules can be resolved or presented like any other.
StrandPtr make_ext_strand(std::shared_ptr<const TruncatedResolution> res, int a,
                          StrandPtr m2, std::string name);

// Hom(m1, m2) as a strand module: Hom is left exact, so the kernel of
// Hom(F_0, m2) -> Hom(F_1, m2) along the presentation is exact — no
// resolution beyond the presentation itself is needed.
StrandPtr make_hom_strand(const PresentedModule& m1, StrandPtr m2, std::string name);

// Generators (through gen_bound) and relations (through rel_bound) of a
// strand module, as a presented module over the same base. The result is
// complete only when the true module has no generator or relation beyond the
// windows; the windows are recorded in the module's name.
PresentedModule presentation_from_strands(StrandPtr sm, std::int64_t gen_bound,
                                          std::int64_t rel_bound, std::string name);

}  // namespace detk::strands
