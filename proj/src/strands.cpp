#include "detk/strands.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <utility>

#include "detk/common.hpp"

namespace detk::strands {

using la::SparseVec;
using modules::GradedFreeModule;
using modules::GradedMap;
using rings::CoeffField;
using rings::FieldElem;
using rings::Mono;

namespace {

SparseVec unit_vec(std::uint32_t k) {
    SparseVec v;
    v.push(k, 1);
    return v;
}

std::uint32_t fe_val(const FieldElem& c, std::uint32_t p) {
    std::int64_t v = c.num % std::int64_t(p);
    if (v < 0) v += p;
    return std::uint32_t(v);
}

// Accumulates scaled sparse vectors (with index offsets), then merges.
struct Accum {
    std::vector<std::pair<std::uint32_t, std::uint64_t>> ents;

    void add(const SparseVec& v, std::uint64_t scale, std::uint32_t offset, std::uint32_t p) {
        scale %= p;
        if (!scale) return;
        for (auto [i, val] : v.ents) ents.emplace_back(i + offset, scale * val % p);
    }

    SparseVec collect(std::uint32_t p) {
        std::sort(ents.begin(), ents.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        SparseVec out;
        std::size_t i = 0;
        while (i < ents.size()) {
            std::uint32_t idx = ents[i].first;
            std::uint64_t sum = 0;
            while (i < ents.size() && ents[i].first == idx) sum += ents[i++].second;
        // Each addend is < p and the count fits 32 bits, so the sum fits u64.
            out.push(idx, std::uint32_t(sum % p));
        }
        return out;
    }
};

int checked_int_dim(std::int64_t v) {
    require(v >= 0 && v <= std::numeric_limits<int>::max(), "strand dimension overflow: ", v);
    return int(v);
}

constexpr std::int64_t kMaxStrandDegree = 120;  // monomial exponents are byte-packed

}  // namespace

// ------------------------------------------------------------ QuotientSpace

QuotientSpace::QuotientSpace(std::uint32_t p, int ambient_dim)
    : ambient(ambient_dim), span(p, std::uint32_t(ambient_dim), false) {}

void QuotientSpace::finalize() {
    coord_of.assign(std::size_t(ambient), -1);
    coset.clear();
    auto pivots = span.pivot_columns();
    std::size_t pi = 0;
    for (int i = 0; i < ambient; ++i) {
        if (pi < pivots.size() && pivots[pi] == std::uint32_t(i)) {
            ++pi;
            continue;
        }
        coord_of[std::size_t(i)] = int(coset.size());
        coset.push_back(i);
    }
}

SparseVec QuotientSpace::reduce(const SparseVec& v) {
    SparseVec out;
    if (span.rank() == 0) {
        for (auto [i, val] : v.ents) out.push(std::uint32_t(coord_of[i]), val);
        return out;
    }
    auto red = span.reduce(v);
    for (auto [i, val] : red.remainder.ents) {
        int q = coord_of[i];
        require(q >= 0, "reduction left a pivot coordinate; echelon data corrupt");
        out.push(std::uint32_t(q), val);
    }
    return out;
}

QuotientSpace make_quotient(std::uint32_t p, int ambient_dim,
                            const std::vector<SparseVec>& subspace) {
    QuotientSpace q(p, ambient_dim);
    for (const SparseVec& v : subspace) q.span.insert(v);
    q.finalize();
    return q;
}

// ----------------------------------------------------------------- BaseRing

BaseRing::BaseRing(RingPtr ring, std::vector<Polynomial> ideal, std::string name)
    : ring_(std::move(ring)), name_(std::move(name)) {
    require(ring_ != nullptr, "base ring requires a polynomial ring");
    prime_ = ring_->field().characteristic();
    require(prime_ != 0, "strand computations need a prime coefficient field");
    for (Polynomial& g : ideal)
        if (!g.is_zero()) {
            require(g.ring().get() == ring_.get(), "ideal generator lives in a different ring");
            ideal_.push_back(std::move(g));
        }
}

BasePtr BaseRing::polynomial(RingPtr ring) {
    return BasePtr(new BaseRing(std::move(ring), {}, "R"));
}

BasePtr BaseRing::quotient(RingPtr ring, std::vector<Polynomial> ideal_gens, std::string name) {
    BasePtr b(new BaseRing(std::move(ring), std::move(ideal_gens), std::move(name)));
    require(b->is_quotient(), "quotient base needs at least one nonzero ideal generator");
    return b;
}

int BaseRing::nvars() const { return ring_->nvars(); }

QuotientSpace& BaseRing::strata(std::int64_t d) {
    auto it = memo_.find(d);
    if (it != memo_.end()) return it->second;
    int ambient = checked_int_dim(ring_->dim_of_degree(int(d)));
    auto [ins, fresh] = memo_.try_emplace(d, prime_, ambient);
    QuotientSpace& q = ins->second;
    for (const Polynomial& g : ideal_) {
        std::int64_t dg = g.degree();
        if (dg > d) continue;
        for (const Mono& m : ring_->basis_of_degree(int(d - dg))) {
            Polynomial gm = g.times_monomial(m);
            SparseVec vec;
            for (const auto& t : gm.terms())
                vec.push(std::uint32_t(ring_->index_in_degree(t.mono)), fe_val(t.coeff, prime_));
            q.span.insert(vec);
        }
    }
    q.finalize();
    return q;
}

int BaseRing::dim(std::int64_t d) {
    if (d < 0) return 0;
    require(d <= kMaxStrandDegree, "strand degree out of range: ", d);
    if (!is_quotient()) return checked_int_dim(ring_->dim_of_degree(int(d)));
    return strata(d).dim();
}

SparseVec BaseRing::reduce(std::int64_t d, const SparseVec& rvec) {
    if (!is_quotient()) return rvec;
    return strata(d).reduce(rvec);
}

Mono BaseRing::rep_mono(std::int64_t d, int k) {
    const auto& basis = ring_->basis_of_degree(int(d));
    if (!is_quotient()) return basis[std::size_t(k)];
    return basis[std::size_t(strata(d).coset[std::size_t(k)])];
}

SparseVec BaseRing::encode(const Polynomial& p, std::int64_t d) {
    if (p.is_zero()) return {};
    require(p.degree() == d, "encode: polynomial degree ", p.degree(), " != ", d);
    SparseVec vec;
    for (const auto& t : p.terms())
        vec.push(std::uint32_t(ring_->index_in_degree(t.mono)), fe_val(t.coeff, prime_));
    return reduce(d, vec);
}

SparseVec BaseRing::mult(std::int64_t d, int k, const Polynomial& p) {
    require(!p.is_zero(), "mult by the zero polynomial has no degree");
    Polynomial q = p.times_monomial(rep_mono(d, k));
    return encode(q, d + p.degree());
}

SparseVec BaseRing::mult_var(std::int64_t d, int k, int var) {
    Mono m = rings::mono_mul(rep_mono(d, k), rings::mono_var(var));
    SparseVec vec = unit_vec(std::uint32_t(ring_->index_in_degree(m)));
    return reduce(d + 1, vec);
}

// ------------------------------------------------------------- free layouts

FreeLayout layout_at(BaseRing& base, const std::vector<std::int64_t>& twists, std::int64_t d) {
    FreeLayout lay;
    lay.offsets.resize(twists.size() + 1);
    lay.offsets[0] = 0;
    for (std::size_t i = 0; i < twists.size(); ++i)
        lay.offsets[i + 1] = lay.offsets[i] + base.dim(d - twists[i]);
    return lay;
}

std::vector<SparseVec> strand_columns(BaseRing& base, const GradedMap& P, std::int64_t d) {
    require(P.ring().get() == base.ring().get(), "strand of a map over a different ring");
    const auto& src = P.source().twists;
    const auto& tgt = P.target().twists;
    FreeLayout tlay = layout_at(base, tgt, d);
    std::vector<SparseVec> cols;
    for (int j = 0; j < P.cols(); ++j) {
        std::int64_t sd = d - src[std::size_t(j)];
        int bd = base.dim(sd);
        for (int k = 0; k < bd; ++k) {
            Accum acc;
            for (int i = 0; i < P.rows(); ++i) {
                const Polynomial& e = P.at(i, j);
                if (e.is_zero()) continue;
                acc.add(base.mult(sd, k, e), 1, std::uint32_t(tlay.offsets[std::size_t(i)]),
                        base.prime());
            }
            cols.push_back(acc.collect(base.prime()));
        }
    }
    return cols;
}

namespace {

// Shared body for free_mult / free_mult_var.
template <typename MultFn>
SparseVec free_mult_impl(BaseRing& base, const std::vector<std::int64_t>& twists, std::int64_t d,
                         const SparseVec& v, std::int64_t out_shift, const MultFn& mult) {
    FreeLayout lay = layout_at(base, twists, d);
    FreeLayout out_lay = layout_at(base, twists, d + out_shift);
    Accum acc;
    std::size_t i = 0;
    for (auto [idx, val] : v.ents) {
        while (int(idx) >= lay.offsets[i + 1]) ++i;
        int k = int(idx) - lay.offsets[i];
        acc.add(mult(d - twists[i], k), val, std::uint32_t(out_lay.offsets[i]), base.prime());
    }
    return acc.collect(base.prime());
}

}  // namespace

SparseVec free_mult(BaseRing& base, const std::vector<std::int64_t>& twists, std::int64_t d,
                    const SparseVec& v, const Polynomial& p) {
    require(!p.is_zero(), "free_mult by the zero polynomial has no degree");
    return free_mult_impl(base, twists, d, v, p.degree(),
                          [&](std::int64_t bd, int k) { return base.mult(bd, k, p); });
}

SparseVec free_mult_var(BaseRing& base, const std::vector<std::int64_t>& twists, std::int64_t d,
                        const SparseVec& v, int var) {
    return free_mult_impl(base, twists, d, v, 1,
                          [&](std::int64_t bd, int k) { return base.mult_var(bd, k, var); });
}

// ---------------------------------------------------------- PresentedModule

PresentedModule presented(BasePtr base, GradedMap pres, std::string name) {
    require(base != nullptr, "presented module needs a base");
    require(pres.ring().get() == base->ring().get(),
            "presentation lives over a different ring than the base");
    return PresentedModule{std::move(base), std::move(pres), std::move(name)};
}

PresentedModule free_presented(BasePtr base, std::vector<std::int64_t> twists, std::string name) {
    require(base != nullptr, "presented module needs a base");
    GradedMap pres(base->ring(), modules::free_module({}), modules::free_module(std::move(twists)));
    return PresentedModule{std::move(base), std::move(pres), std::move(name)};
}

// ------------------------------------------------------------ StrandModule

StrandModule::StrandModule(BasePtr base, std::string name)
    : base_(std::move(base)), name_(std::move(name)) {
    require(base_ != nullptr, "strand module needs a base");
}

namespace {

class CokerStrand final : public StrandModule {
  public:
    explicit CokerStrand(PresentedModule m)
        : StrandModule(m.base, m.name), m_(std::move(m)) {
        hint_ = 0;
        const auto& tw = m_.gen_twists();
        if (!tw.empty()) hint_ = *std::min_element(tw.begin(), tw.end());
    }

    int dim(std::int64_t d) override { return piece(d).q.dim(); }

    SparseVec act(std::int64_t d, const SparseVec& v, const Polynomial& p) override {
        require(!p.is_zero(), "act by the zero polynomial has no degree");
        Piece& src = piece(d);
        std::int64_t d2 = d + p.degree();
        Piece& dst = piece(d2);
        const auto& tw = m_.gen_twists();
        Accum acc;
        std::size_t i = 0;
        for (auto [ci, val] : v.ents) {
            int amb = src.q.coset[ci];
            while (amb >= src.lay.offsets[i + 1]) ++i;
            int k = amb - src.lay.offsets[i];
            acc.add(base().mult(d - tw[i], k, p), val, std::uint32_t(dst.lay.offsets[i]),
                    base().prime());
        }
        SparseVec ambient = acc.collect(base().prime());
        return dst.q.reduce(ambient);
    }

    std::int64_t min_degree_hint() override { return hint_; }

  private:
    struct Piece {
        FreeLayout lay;
        QuotientSpace q;
    };

    Piece& piece(std::int64_t d) {
        auto it = memo_.find(d);
        if (it != memo_.end()) return it->second;
        FreeLayout lay = layout_at(base(), m_.gen_twists(), d);
        QuotientSpace q(base().prime(), lay.total());
        for (const SparseVec& col : strand_columns(base(), m_.pres, d)) q.span.insert(col);
        q.finalize();
        return memo_.emplace(d, Piece{std::move(lay), std::move(q)}).first->second;
    }

    PresentedModule m_;
    std::int64_t hint_ = 0;
    std::map<std::int64_t, Piece> memo_;
};

class KernelStrand final : public StrandModule {
  public:
    KernelStrand(BasePtr base, GradedMap psi, std::string name)
        : StrandModule(std::move(base), std::move(name)), psi_(std::move(psi)) {
        require(psi_.ring().get() == this->base().ring().get(),
                "kernel strand over a different ring");
        hint_ = 0;
        const auto& tw = psi_.source().twists;
        if (!tw.empty()) hint_ = *std::min_element(tw.begin(), tw.end());
    }

    int dim(std::int64_t d) override { return int(piece(d).basis.size()); }

    SparseVec act(std::int64_t d, const SparseVec& v, const Polynomial& p) override {
        require(!p.is_zero(), "act by the zero polynomial has no degree");
        Piece& src = piece(d);
        Accum acc;
        for (auto [ci, val] : v.ents) acc.add(src.basis[ci], val, 0, base().prime());
        SparseVec ambient = acc.collect(base().prime());
        SparseVec moved = free_mult(base(), psi_.source().twists, d, ambient, p);
        Piece& dst = piece(d + p.degree());
        auto red = dst.tracked.reduce(moved);
        require(red.remainder.empty(), name(), ": multiplication left the kernel strand");
        return red.combo;
    }

    std::int64_t min_degree_hint() override { return hint_; }

  private:
    struct Piece {
        std::vector<SparseVec> basis;  // kernel vectors over the source layout
        la::FpSpan tracked;            // echelon of the basis (ids = basis indices)
    };

    Piece& piece(std::int64_t d) {
        auto it = memo_.find(d);
        if (it != memo_.end()) return it->second;
        std::vector<SparseVec> cols = strand_columns(base(), psi_, d);
        int tgt_dim = layout_at(base(), psi_.target().twists, d).total();
        int src_dim = layout_at(base(), psi_.source().twists, d).total();
        auto kern = la::sparse_column_kernel(std::uint32_t(tgt_dim), cols, base().prime());
        Piece pc{std::move(kern.basis), la::FpSpan(base().prime(), std::uint32_t(src_dim), true)};
        for (const SparseVec& b : pc.basis)
            require(pc.tracked.insert(b), "kernel basis is not independent");
        return memo_.emplace(d, std::move(pc)).first->second;
    }

    GradedMap psi_;
    std::int64_t hint_ = 0;
    std::map<std::int64_t, Piece> memo_;
};

}  // namespace

StrandPtr make_strand(const PresentedModule& m) { return std::make_shared<CokerStrand>(m); }

StrandPtr make_kernel_strand(BasePtr base, GradedMap psi, std::string name) {
    return std::make_shared<KernelStrand>(std::move(base), std::move(psi), std::move(name));
}

StrandPiece graded_piece(StrandModule& m, std::int64_t d) { return {d, m.dim(d)}; }

StrandPiece graded_piece(const PresentedModule& m, std::int64_t d) {
    auto sm = make_strand(m);
    return graded_piece(*sm, d);
}

// Polynomial column entries from a coordinate vector over `twists` at degree d.
std::vector<Polynomial> column_polys(BaseRing& base, const std::vector<std::int64_t>& twists,
                                     std::int64_t d, const SparseVec& v) {
    FreeLayout lay = layout_at(base, twists, d);
    const CoeffField& F = base.ring()->field();
    std::vector<std::vector<rings::Term>> terms(twists.size());
    std::size_t i = 0;
    for (auto [idx, val] : v.ents) {
        while (int(idx) >= lay.offsets[i + 1]) ++i;
        int k = int(idx) - lay.offsets[i];
        terms[i].push_back({base.rep_mono(d - twists[i], k), F.from_int(std::int64_t(val))});
    }
    std::vector<Polynomial> out;
    out.reserve(twists.size());
    for (auto& ts : terms) out.emplace_back(base.ring(), std::move(ts));
    return out;
}

// ------------------------------------------------------- resolution engine

namespace {

// (target ambient dimension, strand columns in source-layout order) at degree d.
using ColumnProvider = std::function<std::pair<int, std::vector<SparseVec>>(std::int64_t)>;

struct KernelScan {
    std::vector<std::pair<std::int64_t, SparseVec>> gens;  // minimal kernel generators
    bool all_kernels_zero = true;
};

// Degree-by-degree minimal generators of ker(columns) inside the window.
// Kernel strands are spanned degree to degree by variable multiples of the
// previous strand; full kernel extraction happens only at degrees where the
// dimension outgrows that span (i.e. where new generators live).
KernelScan scan_kernel(BaseRing& base, const std::vector<std::int64_t>& src_twists,
                       std::int64_t bound, const ColumnProvider& provider) {
    KernelScan out;
    if (src_twists.empty()) return out;
    std::int64_t dmin = *std::min_element(src_twists.begin(), src_twists.end());
    std::uint32_t p = base.prime();
    int nv = base.nvars();
    std::vector<SparseVec> prev;  // spanning set of the kernel strand at d-1
    for (std::int64_t d = dmin; d <= bound; ++d) {
        FreeLayout lay = layout_at(base, src_twists, d);
        int ncols = lay.total();
        if (ncols == 0) {
            prev.clear();
            continue;
        }
        auto [tgt_dim, cols] = provider(d);
        require(int(cols.size()) == ncols, "column provider disagrees with the source layout");
        la::FpSpan rk(p, std::uint32_t(tgt_dim));
        for (const SparseVec& c : cols) rk.insert(c);
        int dim_ker = ncols - rk.rank();
        la::FpSpan span1(p, std::uint32_t(ncols));
        for (const SparseVec& b : prev)
            for (int v = 0; v < nv; ++v) span1.insert(free_mult_var(base, src_twists, d - 1, b, v));
        require(span1.rank() <= dim_ker, "kernel propagation exceeded the kernel dimension");
        if (dim_ker == 0) {
            prev.clear();
            continue;
        }
        out.all_kernels_zero = false;
        if (dim_ker == span1.rank()) {
            prev = span1.row_vectors();
            continue;
        }
        auto kern = la::sparse_column_kernel(std::uint32_t(tgt_dim), cols, p);
        require(int(kern.basis.size()) == dim_ker, "kernel extraction disagrees with the rank");
        for (const SparseVec& kv : kern.basis) {
            auto red = span1.reduce(kv);
            if (!red.remainder.empty()) {
                out.gens.emplace_back(d, kv);
                span1.absorb(std::move(red));
            }
        }
        prev = std::move(kern.basis);
    }
    return out;
}

struct ResolutionBuilder {
    BasePtr base;
    std::int64_t bound;
    int max_steps;
    std::vector<GradedFreeModule> terms;
    std::vector<GradedMap> diffs;
    bool step_censored = false;

    // Turn scanned generators into the next term and differential.
    void append_step(const std::vector<std::pair<std::int64_t, SparseVec>>& gens) {
        const auto& prev_tw = terms.back().twists;
        std::vector<std::int64_t> tw;
        tw.reserve(gens.size());
        for (const auto& [d, vec] : gens) tw.push_back(d);
        GradedFreeModule next = modules::free_module(tw);
        GradedMap dk(base->ring(), next, terms.back());
        for (std::size_t j = 0; j < gens.size(); ++j) {
            auto polys = column_polys(*base, prev_tw, gens[j].first, gens[j].second);
            for (std::size_t i = 0; i < polys.size(); ++i)
                if (!polys[i].is_zero()) dk.set(int(i), int(j), std::move(polys[i]));
        }
        terms.push_back(std::move(next));
        diffs.push_back(std::move(dk));
    }

    // Scan kernels of the last differential until the resolution closes, the
    // window shows no further generators, or the step limit is hit.
    void run_tail() {
        while (!diffs.empty()) {
            if (int(diffs.size()) >= max_steps) {
                step_censored = true;
                return;
            }
            const GradedMap& last = diffs.back();
            auto provider = [&](std::int64_t d) {
                int tgt_dim = layout_at(*base, last.target().twists, d).total();
                return std::make_pair(tgt_dim, strand_columns(*base, last, d));
            };
            KernelScan scan = scan_kernel(*base, last.source().twists, bound, provider);
            require(!scan.gens.empty() || scan.all_kernels_zero,
                    "kernel strand without visible generators; scan inconsistent");
            if (scan.gens.empty()) return;
            append_step(scan.gens);
        }
    }

    TruncatedResolution finish(std::string name, bool relations_censored) {
        TruncatedResolution res;
        res.base = base;
        res.terms = std::move(terms);
        res.diffs = std::move(diffs);
        DepthReport& rep = res.report;
        rep.name = std::move(name);
        rep.bound = bound;
        rep.pd = res.length();
        rep.exact_within_bound = !step_censored && !relations_censored;
        if (step_censored)
            rep.notes = "syzygies still open at the step limit; pd is a lower bound";
        else if (relations_censored)
            rep.notes = "presentation has relations beyond the degree bound";
        else
            rep.notes = "kernel strands vanish through the degree bound";
        if (rep.exact_within_bound && !base->is_quotient())
            rep.depth = base->nvars() - rep.pd;
        return res;
    }
};

}  // namespace

TruncatedResolution truncated_min_resolution(const PresentedModule& m, std::int64_t bound,
                                             int max_steps) {
    require(max_steps >= 1, "max_steps must be positive");
    const GradedMap& P = m.pres;
    for (int i = 0; i < P.rows(); ++i)
        for (int j = 0; j < P.cols(); ++j) {
            const Polynomial& e = P.at(i, j);
            require(e.is_zero() || e.degree() > 0,
                    m.name, ": presentation is not minimal (constant entry at row ", i,
                    ", column ", j, ")");
        }

    ResolutionBuilder b{m.base, bound, max_steps, {}, {}, false};
    b.terms.push_back(modules::free_module(P.target().twists));
    if (P.target().rank() == 0) return b.finish(m.name, false);

    const auto& gtw = P.target().twists;
    std::int64_t mingen = *std::min_element(gtw.begin(), gtw.end());
    require(bound >= mingen, m.name, ": degree bound ", bound,
            " sees no generator (first generator degree ", mingen, ")");

    bool relations_censored = false;
    if (P.source().rank() > 0) {
        // Minimal generators of the relation image, degree by degree: the
        // strand is spanned by variable multiples of the previous strand plus
        // the presentation columns arriving exactly at this degree.
        const auto& stw = P.source().twists;
        for (std::int64_t s : stw)
            if (s > bound) relations_censored = true;
        std::vector<std::pair<std::int64_t, SparseVec>> gens;
        std::int64_t dmin = *std::min_element(stw.begin(), stw.end());
        std::vector<SparseVec> prev;
        std::uint32_t p = m.base->prime();
        int nv = m.base->nvars();
        for (std::int64_t d = dmin; d <= bound; ++d) {
            FreeLayout lay = layout_at(*m.base, gtw, d);
            la::FpSpan S(p, std::uint32_t(lay.total()));
            for (const SparseVec& bv : prev)
                for (int v = 0; v < nv; ++v) S.insert(free_mult_var(*m.base, gtw, d - 1, bv, v));
            for (int j = 0; j < P.cols(); ++j) {
                if (stw[std::size_t(j)] != d) continue;
                Accum acc;
                for (int i = 0; i < P.rows(); ++i) {
                    const Polynomial& e = P.at(i, j);
                    if (e.is_zero()) continue;
                    acc.add(m.base->encode(e, d - gtw[std::size_t(i)]), 1,
                            std::uint32_t(lay.offsets[std::size_t(i)]), p);
                }
                SparseVec col = acc.collect(p);
                auto red = S.reduce(col);
                if (!red.remainder.empty()) {
                    gens.emplace_back(d, std::move(col));
                    S.absorb(std::move(red));
                }
            }
            prev = S.row_vectors();
        }
        if (!gens.empty()) b.append_step(gens);
    }
    b.run_tail();
    return b.finish(m.name, relations_censored);
}

TruncatedResolution resolve_strand_module(StrandModule& target, std::int64_t bound,
                                          const std::string& name, int max_steps) {
    require(max_steps >= 1, "max_steps must be positive");
    BasePtr base = target.base_ptr();
    std::uint32_t p = base->prime();
    int nv = base->nvars();
    const RingPtr& ring = base->ring();

    // Minimal generators of the target module itself.
    std::vector<std::pair<std::int64_t, int>> tgens;  // (degree, coordinate)
    for (std::int64_t d = target.min_degree_hint(); d <= bound; ++d) {
        int dimd = target.dim(d);
        if (dimd == 0) continue;
        la::FpSpan S(p, std::uint32_t(dimd));
        int dprev = target.dim(d - 1);
        for (int k = 0; k < dprev && S.rank() < dimd; ++k)
            for (int v = 0; v < nv; ++v)
                S.insert(target.act(d - 1, unit_vec(std::uint32_t(k)),
                                    Polynomial::variable(ring, v)));
        for (int j = 0; j < dimd && S.rank() < dimd; ++j) {
            auto red = S.reduce(unit_vec(std::uint32_t(j)));
            if (!red.remainder.empty()) {
                tgens.emplace_back(d, j);
                S.absorb(std::move(red));
            }
        }
    }
    require(!tgens.empty(), name, ": no generator visible below degree ", bound);

    ResolutionBuilder b{base, bound, max_steps, {}, {}, false};
    std::vector<std::int64_t> tw;
    tw.reserve(tgens.size());
    for (const auto& [d, j] : tgens) tw.push_back(d);
    b.terms.push_back(modules::free_module(tw));

    auto tau_provider = [&](std::int64_t d) {
        int tdim = target.dim(d);
        std::vector<SparseVec> cols;
        for (const auto& [dg, jg] : tgens) {
            int bd = base->dim(d - dg);
            for (int k = 0; k < bd; ++k) {
                Polynomial mono = Polynomial::monomial(ring, base->rep_mono(d - dg, k),
                                                       ring->field().one());
                cols.push_back(target.act(dg, unit_vec(std::uint32_t(jg)), mono));
            }
        }
        return std::make_pair(tdim, std::move(cols));
    };
    KernelScan scan = scan_kernel(*base, tw, bound, tau_provider);
    if (!scan.gens.empty()) {
        b.append_step(scan.gens);
        b.run_tail();
    }
    return b.finish(name, false);
}

TruncatedResolution resolution_from_complex(BasePtr base, const complexes::ChainComplex& cx,
                                            std::string name) {
    require(base != nullptr, "resolution needs a base");
    require(cx.lo == 0, "resolution complexes must start at position 0, got ", cx.lo);
    TruncatedResolution res;
    res.base = std::move(base);
    res.terms = cx.terms;
    res.diffs = cx.diffs;
    res.report.name = std::move(name);
    res.report.bound = -1;
    res.report.pd = res.length();
    res.report.exact_within_bound = true;
    res.report.notes = "supplied as a finite resolution complex (no truncation)";
    if (!res.base->is_quotient()) res.report.depth = res.base->nvars() - res.report.pd;
    return res;
}

std::string DepthReport::to_string() const {
    std::string s = name + ": pd ";
    s += exact_within_bound ? "= " : ">= ";
    s += std::to_string(pd);
    if (depth >= 0) s += ", depth = " + std::to_string(depth);
    if (bound >= 0) s += " (degree bound " + std::to_string(bound) + ")";
    if (!notes.empty()) s += " -- " + notes;
    return s;
}

complexes::BettiTable TruncatedResolution::betti_table() const {
    complexes::BettiTable out;
    for (std::size_t k = 0; k < terms.size(); ++k)
        for (std::int64_t w : terms[k].twists) out.beta[{int(k), w}]++;
    return out;
}

complexes::ChainComplex TruncatedResolution::to_chain_complex() const {
    require(!base->is_quotient(),
            "resolutions over a quotient base do not form a complex over the ambient ring");
    complexes::ChainComplex cx;
    cx.ring = base->ring();
    cx.lo = 0;
    cx.terms = terms;
    cx.diffs = diffs;
    cx.validate();
    return cx;
}

// --------------------------------------------------------- Hom/Ext strands

namespace {

std::vector<int> block_offsets(StrandModule& m2, const std::vector<std::int64_t>& twists,
                               std::int64_t e) {
    std::vector<int> off(twists.size() + 1, 0);
    for (std::size_t i = 0; i < twists.size(); ++i) off[i + 1] = off[i] + m2.dim(twists[i] + e);
    return off;
}

// Columns of the map Hom(F_lo, m2)_e -> Hom(F_hi, m2)_e, phi -> phi ∘ d,
// for d: F_hi -> F_lo. Column order: F_lo generator-major, then m2 coordinate.
std::vector<SparseVec> hom_precompose_columns(const GradedMap& d, StrandModule& m2,
                                              std::int64_t e, int& tgt_dim_out) {
    const auto& lo = d.target().twists;  // rows of d
    const auto& hi = d.source().twists;  // columns of d
    std::vector<int> off_hi = block_offsets(m2, hi, e);
    tgt_dim_out = off_hi.back();
    std::vector<SparseVec> cols;
    std::uint32_t p = m2.base().prime();
    for (std::size_t v = 0; v < lo.size(); ++v) {
        int bdim = m2.dim(lo[v] + e);
        for (int k = 0; k < bdim; ++k) {
            Accum acc;
            for (std::size_t u = 0; u < hi.size(); ++u) {
                const Polynomial& entry = d.at(int(v), int(u));
                if (entry.is_zero()) continue;
                acc.add(m2.act(lo[v] + e, unit_vec(std::uint32_t(k)), entry), 1,
                        std::uint32_t(off_hi[u]), p);
            }
            cols.push_back(acc.collect(p));
        }
    }
    return cols;
}

}  // namespace

HomStrandResult hom_strand(const PresentedModule& m1, StrandModule& m2, std::int64_t elo,
                           std::int64_t ehi, bool with_basis) {
    require(elo <= ehi, "empty hom window [", elo, ", ", ehi, "]");
    require(m1.base.get() == &m2.base(),
            "hom_strand needs both modules over one shared base");
    const GradedMap& P = m1.pres;
    const auto& gtw = P.target().twists;
    const auto& rtw = P.source().twists;
    std::uint32_t p = m2.base().prime();

    HomStrandResult out;
    out.block_twists = gtw;
    for (std::int64_t e = elo; e <= ehi; ++e) {
        std::vector<int> off_g = block_offsets(m2, gtw, e);
        int unknowns = off_g.back();
        if (unknowns == 0) {
            out.dims[e] = 0;
            if (with_basis) out.basis[e] = {};
            continue;
        }
        std::vector<int> off_r = block_offsets(m2, rtw, e);
        int constraints = off_r.back();
        std::vector<SparseVec> cols;
        cols.reserve(std::size_t(unknowns));
        for (std::size_t j = 0; j < gtw.size(); ++j) {
            int bdim = m2.dim(gtw[j] + e);
            for (int k = 0; k < bdim; ++k) {
                Accum acc;
                for (std::size_t r = 0; r < rtw.size(); ++r) {
                    const Polynomial& entry = P.at(int(j), int(r));
                    if (entry.is_zero()) continue;
                    acc.add(m2.act(gtw[j] + e, unit_vec(std::uint32_t(k)), entry), 1,
                            std::uint32_t(off_r[r]), p);
                }
                cols.push_back(acc.collect(p));
            }
        }
        if (with_basis) {
            auto kern = la::sparse_column_kernel(std::uint32_t(constraints), cols, p);
            out.dims[e] = int(kern.basis.size());
            out.basis[e] = std::move(kern.basis);
        } else {
            out.dims[e] = unknowns - la::sparse_rank(std::uint32_t(constraints), cols, p);
        }
    }
    return out;
}

std::map<std::int64_t, int> ext_strand(const TruncatedResolution& res, int a, StrandModule& m2,
                                       std::int64_t elo, std::int64_t ehi) {
    require(a >= 0, "ext index must be nonnegative, got ", a);
    require(elo <= ehi, "empty ext window [", elo, ", ", ehi, "]");
    require(res.base.get() == &m2.base(), "ext_strand needs both sides over one shared base");
    int L = res.length();
    std::map<std::int64_t, int> dims;
    if (a > L) {
        require(res.report.exact_within_bound, res.report.name,
                ": truncated resolution reaches index ", L, " but Ext^", a,
                " needs index ", a + 1, "; raise the truncation");
        for (std::int64_t e = elo; e <= ehi; ++e) dims[e] = 0;
        return dims;
    }
    bool have_upper = a + 1 <= L;
    require(have_upper || res.report.exact_within_bound, res.report.name,
            ": truncated resolution reaches index ", L, " but Ext^", a, " needs index ", a + 1,
            "; raise the truncation");
    const auto& fa = res.terms[std::size_t(a)].twists;
    for (std::int64_t e = elo; e <= ehi; ++e) {
        int dim_hom = block_offsets(m2, fa, e).back();
        int rank_up = 0, rank_dn = 0, tdim = 0;
        if (have_upper && dim_hom > 0) {
            auto cols = hom_precompose_columns(res.diffs[std::size_t(a)], m2, e, tdim);
            rank_up = la::sparse_rank(std::uint32_t(tdim), cols, m2.base().prime());
        }
        if (a >= 1 && dim_hom > 0) {
            auto cols = hom_precompose_columns(res.diffs[std::size_t(a) - 1], m2, e, tdim);
            rank_dn = la::sparse_rank(std::uint32_t(tdim), cols, m2.base().prime());
        }
        int d = dim_hom - rank_up - rank_dn;
        require(d >= 0, "ext strand dimension went negative; homology data inconsistent");
        dims[e] = d;
    }
    return dims;
}

namespace {

// Ext^a(m1, m2) as a strand module: the subquotient ker/im of the Hom
// strands along the resolution, with representatives and a tracked echelon
// (image vectors first, then homology representatives) per degree.
class ExtStrand final : public StrandModule {
  public:
    ExtStrand(std::shared_ptr<const TruncatedResolution> res, int a, StrandPtr m2,
              std::string name)
        : StrandModule(m2->base_ptr(), std::move(name)), res_(std::move(res)), a_(a),
          m2_(std::move(m2)) {
        require(a_ >= 0, "ext index must be nonnegative, got ", a_);
        require(res_->base.get() == &m2_->base(), "ext strand needs one shared base");
        int L = res_->length();
        bool have_upper = a_ + 1 <= L;
        require((a_ <= L && have_upper) || res_->report.exact_within_bound, res_->report.name,
                ": truncated resolution reaches index ", L, " but Ext^", a_, " needs index ",
                a_ + 1, "; raise the truncation");
        if (a_ <= L) fa_ = res_->terms[std::size_t(a_)].twists;
    }

    int dim(std::int64_t e) override { return int(piece(e).reps.size()); }

    SparseVec act(std::int64_t e, const SparseVec& v, const Polynomial& p) override {
        require(!p.is_zero(), "act by the zero polynomial has no degree");
        Piece& src = piece(e);
        std::uint32_t pr = base().prime();
        Accum lift;
        for (auto [ci, val] : v.ents) lift.add(src.reps[ci], val, 0, pr);
        SparseVec ambient = lift.collect(pr);
        std::int64_t e2 = e + p.degree();
        Piece& dst = piece(e2);
        Accum acc;
        std::size_t u = 0;
        for (auto [idx, val] : ambient.ents) {
            while (int(idx) >= src.offsets[u + 1]) ++u;
            int k = int(idx) - src.offsets[u];
            acc.add(m2_->act(fa_[u] + e, unit_vec(std::uint32_t(k)), p), val,
                    std::uint32_t(dst.offsets[u]), pr);
        }
        SparseVec moved = acc.collect(pr);
        auto red = dst.span.reduce(moved);
        require(red.remainder.empty(), name(), ": multiplication left the ext strand");
        SparseVec out;
        for (auto [id, val] : red.combo.ents) {
            int c = dst.id_coord[id];
            if (c >= 0) out.push(std::uint32_t(c), val);
        }
        return out;
    }

    std::int64_t min_degree_hint() override {
        if (fa_.empty()) return 0;
        return m2_->min_degree_hint() - *std::max_element(fa_.begin(), fa_.end());
    }

  private:
    struct Piece {
        std::vector<int> offsets;
        std::vector<SparseVec> reps;
        la::FpSpan span;
        std::vector<int> id_coord;  // insertion id -> homology coordinate or -1
    };

    Piece& piece(std::int64_t e) {
        auto it = memo_.find(e);
        if (it != memo_.end()) return it->second;
        std::vector<int> off = block_offsets(*m2_, fa_, e);
        int ambient = off.empty() ? 0 : off.back();
        Piece pc{std::move(off), {}, la::FpSpan(base().prime(), std::uint32_t(ambient), true), {}};
        if (ambient > 0) {
            if (a_ >= 1) {
                int tdim = 0;
                for (const SparseVec& col :
                     hom_precompose_columns(res_->diffs[std::size_t(a_) - 1], *m2_, e, tdim)) {
                    pc.span.insert(col);
                    pc.id_coord.push_back(-1);
                }
            }
            std::vector<SparseVec> kernel;
            if (a_ + 1 <= res_->length()) {
                int tdim = 0;
                auto cols = hom_precompose_columns(res_->diffs[std::size_t(a_)], *m2_, e, tdim);
                kernel = la::sparse_column_kernel(std::uint32_t(tdim), cols, base().prime()).basis;
            } else {
                for (int j = 0; j < ambient; ++j) kernel.push_back(unit_vec(std::uint32_t(j)));
            }
            for (SparseVec& kv : kernel) {
                auto red = pc.span.reduce(kv);
                if (red.remainder.empty()) continue;
                pc.span.absorb(std::move(red));
                pc.id_coord.push_back(int(pc.reps.size()));
                pc.reps.push_back(std::move(kv));
            }
        }
        return memo_.emplace(e, std::move(pc)).first->second;
    }

    std::shared_ptr<const TruncatedResolution> res_;
    int a_;
    StrandPtr m2_;
    std::vector<std::int64_t> fa_;
    std::map<std::int64_t, Piece> memo_;
};

}  // namespace

StrandPtr make_ext_strand(std::shared_ptr<const TruncatedResolution> res, int a, StrandPtr m2,
                          std::string name) {
    return std::make_shared<ExtStrand>(std::move(res), a, std::move(m2), std::move(name));
}

StrandPtr make_hom_strand(const PresentedModule& m1, StrandPtr m2, std::string name) {
    auto res = std::make_shared<TruncatedResolution>();
    res->base = m1.base;
    res->terms = {m1.pres.target(), m1.pres.source()};
    res->diffs = {m1.pres};
    res->report.name = m1.name;
    res->report.bound = -1;
    res->report.pd = 1;
    res->report.exact_within_bound = false;
    res->report.notes = "presentation wrapped for hom computation";
    return make_ext_strand(std::move(res), 0, std::move(m2), std::move(name));
}

PresentedModule presentation_from_strands(StrandPtr sm, std::int64_t gen_bound,
                                          std::int64_t rel_bound, std::string name) {
    require(sm != nullptr, "presentation_from_strands needs a module");
    BasePtr base = sm->base_ptr();
    const RingPtr& ring = base->ring();
    std::uint32_t p = base->prime();
    int nv = base->nvars();

    std::vector<std::pair<std::int64_t, int>> tgens;
    for (std::int64_t d = sm->min_degree_hint(); d <= gen_bound; ++d) {
        int dimd = sm->dim(d);
        if (dimd == 0) continue;
        la::FpSpan S(p, std::uint32_t(dimd));
        int dprev = sm->dim(d - 1);
        for (int k = 0; k < dprev && S.rank() < dimd; ++k)
            for (int v = 0; v < nv; ++v)
                S.insert(sm->act(d - 1, unit_vec(std::uint32_t(k)), Polynomial::variable(ring, v)));
        for (int j = 0; j < dimd && S.rank() < dimd; ++j) {
            auto red = S.reduce(unit_vec(std::uint32_t(j)));
            if (!red.remainder.empty()) {
                tgens.emplace_back(d, j);
                S.absorb(std::move(red));
            }
        }
    }
    std::vector<std::int64_t> gtw;
    for (const auto& [d, j] : tgens) gtw.push_back(d);

    auto tau_provider = [&](std::int64_t d) {
        int tdim = sm->dim(d);
        std::vector<SparseVec> cols;
        for (const auto& [dg, jg] : tgens) {
            int bd = base->dim(d - dg);
            for (int k = 0; k < bd; ++k) {
                Polynomial mono =
                    Polynomial::monomial(ring, base->rep_mono(d - dg, k), ring->field().one());
                cols.push_back(sm->act(dg, unit_vec(std::uint32_t(jg)), mono));
            }
        }
        return std::make_pair(tdim, std::move(cols));
    };
    KernelScan scan = scan_kernel(*base, gtw, rel_bound, tau_provider);

    GradedFreeModule gens = modules::free_module(gtw);
    std::vector<std::int64_t> rtw;
    for (const auto& [d, vec] : scan.gens) rtw.push_back(d);
    GradedMap pres(ring, modules::free_module(rtw), gens);
    for (std::size_t j = 0; j < scan.gens.size(); ++j) {
        auto polys = column_polys(*base, gtw, scan.gens[j].first, scan.gens[j].second);
        for (std::size_t i = 0; i < polys.size(); ++i)
            if (!polys[i].is_zero()) pres.set(int(i), int(j), std::move(polys[i]));
    }
    name += " [gens<=" + std::to_string(gen_bound) + ", rels<=" + std::to_string(rel_bound) + "]";
    return presented(std::move(base), std::move(pres), std::move(name));
}

}  // namespace detk::strands
