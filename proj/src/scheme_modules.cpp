#include "detk/scheme_modules.hpp"

#include <algorithm>
#include <optional>
#include <random>
#include <utility>

#include "detk/common.hpp"
#include "detk/complexes.hpp"

namespace detk::schemes {

using modules::free_module;
using modules::GradedMap;
using strands::BaseRing;

namespace {

void check_base(const DetScheme& s, const BasePtr& base) {
    require(base != nullptr, "module builder needs a base");
    require(base->ring().get() == s.ring.get(),
            "base was built over a different ring than the scheme");
}

void require_standard(const DetScheme& s) {
    for (std::size_t k = 0; k < s.minor_ideal_gens.size(); ++k)
        require(!s.minor_ideal_gens[k].is_zero(), "maximal minor ", k,
                " vanishes; the minors do not generate the ideal minimally");
}

bool all_entries_linear(const DetScheme& s) {
    for (int i = 0; i < s.degrees.t; ++i)
        for (int j = 0; j < s.degrees.ncols(); ++j)
            if (s.degrees.entry_degree(i, j) != 1) return false;
    return true;
}

}  // namespace

BasePtr base_R(const DetScheme& s) { return BaseRing::polynomial(s.ring); }

BasePtr base_A(const DetScheme& s) {
    return BaseRing::quotient(s.ring, s.minor_ideal_gens, "A");
}

PresentedModule cokernel_module(const DetScheme& s, BasePtr base) {
    check_base(s, base);
    return strands::presented(std::move(base), s.phi, "M");
}

PresentedModule coordinate_ring_module(const DetScheme& s, BasePtr base) {
    check_base(s, base);
    if (base->is_quotient()) return strands::free_presented(std::move(base), {0}, "A");
    GradedMap pres = complexes::build_D(0, s.phi).diff(1);
    return strands::presented(std::move(base), std::move(pres), "A");
}

PresentedModule sym_power_module(const DetScheme& s, int i, BasePtr base) {
    require(i >= 0, "symmetric power index must be nonnegative, got ", i);
    if (i == 0) return coordinate_ring_module(s, std::move(base));
    check_base(s, base);
    GradedMap pres = complexes::build_C(i, s.phi).diff(1);
    return strands::presented(std::move(base), std::move(pres),
                              "S_" + std::to_string(i) + "M");
}

PresentedModule ideal_module(const DetScheme& s, BasePtr base) {
    check_base(s, base);
    require(!base->is_quotient(),
            "the minor ideal is a module over the polynomial ring; over the "
            "quotient use conormal_module");
    require_standard(s);
    GradedMap pres = complexes::build_D(0, s.phi).diff(2);
    return strands::presented(std::move(base), std::move(pres), "I");
}

PresentedModule conormal_module(const DetScheme& s, BasePtr base) {
    check_base(s, base);
    require_standard(s);
    GradedMap syz = complexes::build_D(0, s.phi).diff(2);
    if (base->is_quotient())
        return strands::presented(std::move(base), std::move(syz), "I/I^2");
    // Over the polynomial ring the ideal must kill the generators explicitly:
    // append one column g*e_j per minor g and generator j.
    const auto& gtw = syz.target().twists;
    std::vector<std::int64_t> srctw = syz.source().twists;
    for (std::int64_t w : gtw)
        for (const Polynomial& g : s.minor_ideal_gens)
            srctw.push_back(checked_add(w, g.degree()));
    GradedMap pres(s.ring, free_module(std::move(srctw)), syz.target());
    for (int i = 0; i < syz.rows(); ++i)
        for (int j = 0; j < syz.cols(); ++j)
            if (!syz.at(i, j).is_zero()) pres.set(i, j, syz.at(i, j));
    int col = syz.cols();
    for (int j = 0; j < int(gtw.size()); ++j)
        for (const Polynomial& g : s.minor_ideal_gens) pres.set(j, col++, g);
    return strands::presented(std::move(base), std::move(pres), "I/I^2");
}

PresentedModule canonical_module(const DetScheme& s, BasePtr base) {
    check_base(s, base);
    auto dual = complexes::dualize_shift(complexes::build_D(0, s.phi), s.degrees.n + 1);
    return strands::presented(std::move(base), dual.diff(1), "K_A");
}

StrandPtr dual_module_strand(const DetScheme& s, BasePtr base) {
    check_base(s, base);
    require(base->is_quotient(),
            "Hom(M, A) is a kernel over the quotient; over the polynomial ring "
            "the transpose is injective and the kernel is zero");
    return strands::make_kernel_strand(std::move(base), s.phi.dual_map(), "Hom(M,A)");
}

std::int64_t default_strand_bound(const DetScheme& s) {
    const DegreeMatrix& dm = s.degrees;
    const std::int64_t bmax = dm.b.back();  // degree lists are ascending
    std::int64_t suffix = 0;                // sum of the q largest column degrees
    std::int64_t best = dm.c * bmax;        // q = 0
    for (int q = 1; q <= dm.c; ++q) {
        suffix = checked_add(suffix, dm.a[std::size_t(dm.ncols() - q)]);
        best = std::max(best, checked_add(suffix, (dm.c - q) * bmax));
    }
    return checked_add(checked_mul(2, best), dm.c);
}

DepthGate depth_J_gate(const DetScheme& s, int required, std::uint64_t seed, int trials) {
    DepthGate gate;
    gate.required = required;
    const DegreeMatrix& dm = s.degrees;
    gate.expected =
        int(std::min<std::int64_t>(2 * (dm.c + 1), dm.n + 1) - dm.c);
    gate.formula_ok = gate.expected >= required;
    std::string ev = "expected depth along the submaximal locus = " +
                     std::to_string(gate.expected) + " (general matrix of this shape)";
    if (dm.t == 1) {
        gate.sampled_ok = true;
        ev += "; t = 1, the submaximal ideal is the unit ideal";
    } else {
        PointSearch ps =
            random_point_on_complement(s, Locus::submaximal_minors, trials, seed);
        gate.sampled_ok = ps.found;
        gate.trials_used = ps.trials_used;
        ev += ps.found ? "; found a point off the submaximal locus after " +
                             std::to_string(ps.trials_used) + " trials"
                       : "; no point off the submaximal locus in " +
                             std::to_string(trials) + " trials";
    }
    gate.evidence = std::move(ev);
    return gate;
}

SimplicityReport simplicity_check(const DetScheme& s, int twist_index) {
    require(twist_index >= -1 && twist_index <= s.degrees.c - 1,
            "twist index must lie in [-1, c-1], got ", twist_index);
    SimplicityReport rep;
    rep.twist_index = twist_index;

    auto res = complexes::minimize(complexes::build_D(0, s.phi));
    require(res.terms.size() >= 2, "minor resolution has no generator position");
    rep.n1 = res.terms[1].twists;
    if (res.terms.size() >= 3) rep.n2 = res.terms[2].twists;
    require(!rep.n1.empty(), "the minor ideal has no generators after minimization");
    rep.gate_pass =
        rep.n2.empty() ||
        *std::max_element(rep.n2.begin(), rep.n2.end()) <
            2 * *std::min_element(rep.n1.begin(), rep.n1.end());
    rep.linear_auto = all_entries_linear(s) && s.degrees.t >= 2;

    BasePtr A = base_A(s);
    PresentedModule con = conormal_module(s, A);
    StrandPtr con_strand = strands::make_strand(con);
    rep.hom_dim = strands::hom_strand(con, *con_strand, 0, 0).dims.at(0);
    rep.simple = (rep.hom_dim == 1);

    rep.notes = rep.gate_pass ? "degree gate holds" : "degree gate fails";
    if (rep.linear_auto) rep.notes += " (automatic: linear entries, t >= 2)";
    rep.notes += "; self-hom dimension of the twisted normal module is "
                 "twist-independent, computed from the conormal module";
    return rep;
}

int normal_module_self_hom_dim(const DetScheme& s, int i, std::int64_t gen_bound,
                               std::int64_t rel_bound) {
    require(i >= 0 && i <= s.degrees.c - 1,
            "normal-module twist must lie in [0, c-1], got ", i);
    BasePtr A = base_A(s);
    PresentedModule con = conormal_module(s, A);
    PresentedModule sym = sym_power_module(s, i, A);
    StrandPtr normal = strands::make_hom_strand(
        con, strands::make_strand(sym), "N(" + std::to_string(i) + ")");
    PresentedModule pres = strands::presentation_from_strands(
        normal, gen_bound, rel_bound, normal->name());
    return strands::hom_strand(pres, *normal, 0, 0).dims.at(0);
}

Restriction hyperplane_restrict(const DetScheme& s, std::uint64_t seed,
                                int max_resamples) {
    const DegreeMatrix& dm = s.degrees;
    require(dm.n >= dm.c + 1, "hyperplane restriction needs n >= c+1, got n=", dm.n,
            ", c=", dm.c);
    const auto& field = s.ring->field();
    require(field.kind() == rings::FieldKind::prime,
            "hyperplane restriction samples coefficients; prime field required");

    const int n = dm.n;  // eliminate x_n, keep x_0..x_{n-1}
    std::vector<std::string> names(s.ring->var_names().begin(),
                                   s.ring->var_names().begin() + n);
    RingPtr target = rings::make_poly_ring(n, field, std::move(names));
    DegreeMatrix dm2 = make_degree_matrix(dm.t, dm.c, n - 1, dm.a, dm.b,
                                          dm.positive_entries);

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::int64_t> dist(0, field.characteristic() - 1);
    int resamples = 0;
    for (int attempt = 0; attempt <= max_resamples; ++attempt) {
        std::vector<Polynomial> images;
        images.reserve(std::size_t(n) + 1);
        for (int v = 0; v < n; ++v) images.push_back(Polynomial::variable(target, v));
        std::vector<rings::Term> lin;
        for (int v = 0; v < n; ++v) {
            FieldElem c = field.from_int(dist(rng));
            if (!field.is_zero(c)) lin.push_back({rings::mono_var(v), c});
        }
        images.emplace_back(target, std::move(lin));

        PolynomialEntries mode;
        mode.tag = "restricted(seed=" + std::to_string(seed) + ")";
        mode.rows.resize(std::size_t(dm.t));
        for (int i = 0; i < dm.t; ++i)
            for (int j = 0; j < dm.ncols(); ++j)
                mode.rows[std::size_t(i)].push_back(
                    s.entry(i, j).substitute(target, images));

        bool degenerate = false;
        std::optional<DetScheme> restricted;
        try {
            restricted = build_matrix(target, dm2, mode, /*demand_minimal=*/true);
        } catch (const Error&) {
            degenerate = true;  // a constant entry appeared: non-general section
        }
        if (!degenerate)
            for (const Polynomial& g : restricted->minor_ideal_gens)
                if (g.is_zero()) degenerate = true;
        if (!degenerate) {
            PointSearch ps = random_point_on_complement(
                *restricted, Locus::maximal_minors, 200, seed + 0x9e3779b97f4a7c15ULL);
            degenerate = !ps.found;
        }
        if (degenerate) {
            ++resamples;
            continue;
        }
        return Restriction{std::move(*restricted), std::move(images), resamples};
    }
    fail("hyperplane restriction stayed degenerate after ", resamples,
         " resamples (seed ", seed, ")");
}

}  // namespace detk::schemes
