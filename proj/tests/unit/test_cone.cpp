#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "detk/complexes.hpp"
#include "detk/cone.hpp"
#include "detk/modules.hpp"
#include "detk/scheme.hpp"
#include "detk/scheme_modules.hpp"
#include "doctest.h"

using namespace detk;
using namespace detk::rings;
using namespace detk::modules;
using namespace detk::schemes;
using namespace detk::cones;
namespace cxs = detk::complexes;

namespace {

DetScheme twisted_cubic(const CoeffField& field) {
    auto dm = make_degree_matrix(2, 2, 3, {1, 1, 1}, {0, 0}, true);
    ExplicitEntries entries{{{"x0", "x1", "x2"}, {"x1", "x2", "x3"}}};
    return build_matrix(field, dm, entries);
}

DetScheme generic_linear(const CoeffField& field, int t, int c, int n, std::uint64_t seed) {
    std::vector<std::int64_t> a(std::size_t(t + c - 1), 1);
    std::vector<std::int64_t> b(std::size_t(t), 0);
    auto dm = make_degree_matrix(t, c, n, a, b, true);
    return build_matrix(field, dm, GenericRandom{seed});
}

cxs::BettiTable table_of(
    std::vector<std::pair<std::pair<int, std::int64_t>, std::int64_t>> cells) {
    cxs::BettiTable t;
    for (auto& [key, val] : cells) t.beta[key] = val;
    return t;
}

// Alternating sum over positions of dim R_{d - twist}: the Hilbert function
// of the cokernel when the complex is a resolution.
std::int64_t euler_at(const cxs::ChainComplex& cx, std::int64_t d) {
    std::int64_t total = 0;
    for (int k = cx.lo; k <= cx.hi(); ++k) {
        std::int64_t dim = 0;
        for (std::int64_t w : cx.term(k).twists) dim += cx.ring->dim_of_degree(d - w);
        total += (k % 2 == 0) ? dim : -dim;
    }
    return total;
}

cxs::ChainComplex one_term(const RingPtr& ring, std::vector<std::int64_t> twists) {
    cxs::ChainComplex cx;
    cx.ring = ring;
    cx.lo = 0;
    cx.terms.push_back(free_module(std::move(twists)));
    return cx;
}

cxs::ChainComplex two_term(const RingPtr& ring, int var) {
    cxs::ChainComplex cx;
    cx.ring = ring;
    cx.lo = 0;
    cx.terms.push_back(free_module({0}));
    cx.terms.push_back(free_module({1}));
    GradedMap d(ring, cx.terms[1], cx.terms[0]);
    d.set(0, 0, Polynomial::variable(ring, var));
    cx.diffs.push_back(std::move(d));
    return cx;
}

Polynomial sign_poly(const RingPtr& ring, int parity) {
    const CoeffField& f = ring->field();
    return Polynomial::constant(ring, (((parity % 2) + 2) % 2 == 0) ? f.one()
                                                                    : f.neg(f.one()));
}

const std::vector<std::string> kDualNames = {"rank-one splice dual", "column splice dual",
                                             "identity leg", "insertion homotopy leg"};

}  // namespace

TEST_CASE("tensoring a complex with a free module scales terms and differentials") {
    auto F = CoeffField::prime(32003);
    auto s = twisted_cubic(F);
    auto d1 = cxs::build_D(1, s.phi);
    auto w = dual(s.phi.target());  // rank 2, twists {0,0}
    auto tc = tensor_complex(w, d1);
    REQUIRE(tc.hi() == d1.hi());
    for (int j = 0; j <= d1.hi(); ++j)
        CHECK(tc.term(j).rank() == 2 * d1.term(j).rank());
    // twist multiset doubles
    CHECK(cxs::betti(tc).beta.at({1, 1}) == 2 * cxs::betti(d1).beta.at({1, 1}));
}

TEST_CASE("triple cone: a valid square assembles and minimizes") {
    auto F = CoeffField::prime(32003);
    auto ring = make_poly_ring(2, F);
    TripleConeInput in;
    in.Q = one_term(ring, {0});
    in.P = one_term(ring, {0});
    in.F = one_term(ring, {0});
    in.sigma.push_back(GradedMap::identity(ring, free_module({0})));
    in.tau.push_back(GradedMap(ring, free_module({0}), free_module({0})));  // zero
    in.ell.push_back(GradedMap(ring, free_module({0}), free_module({})));
    auto cone = triple_cone(in);
    CHECK(cone.hi() == 2);
    CHECK(cone.term(0).rank() == 1);
    CHECK(cone.term(1).rank() == 1);
    CHECK(cone.term(2).rank() == 1);
    // sigma is an isomorphism, so Q_0 and P_0 cancel on minimization
    CHECK(cxs::betti(cxs::minimize(cone)) == table_of({{{0, 0}, 1}}));
}

TEST_CASE("triple cone: a broken homotopy is rejected with the failing position") {
    auto F = CoeffField::prime(32003);
    auto ring = make_poly_ring(2, F);
    TripleConeInput in;
    in.Q = one_term(ring, {0});
    in.P = one_term(ring, {0});
    in.F = one_term(ring, {0});
    in.sigma.push_back(GradedMap::identity(ring, free_module({0})));
    in.tau.push_back(GradedMap::identity(ring, free_module({0})));  // tau.sigma != 0
    in.ell.push_back(GradedMap(ring, free_module({0}), free_module({})));
    CHECK_THROWS_WITH_AS(triple_cone(in),
                         doctest::Contains("homotopy identity fails at position 0"),
                         detk::Error);
}

TEST_CASE("triple cone: a broken chain square is rejected with the failing position") {
    auto F = CoeffField::prime(32003);
    auto ring = make_poly_ring(2, F);
    TripleConeInput in;
    in.Q = two_term(ring, 0);  // d = x0
    in.P = two_term(ring, 1);  // d = x1
    cxs::ChainComplex zf;
    zf.ring = ring;
    zf.lo = 0;
    zf.terms.push_back(free_module({}));
    in.F = zf;
    in.sigma.push_back(GradedMap::identity(ring, free_module({0})));
    in.sigma.push_back(GradedMap::identity(ring, free_module({1})));
    in.tau.push_back(GradedMap(ring, free_module({0}), free_module({})));
    in.tau.push_back(GradedMap(ring, free_module({1}), free_module({})));
    in.ell.push_back(GradedMap(ring, free_module({0}), free_module({})));
    in.ell.push_back(GradedMap(ring, free_module({1}), free_module({})));
    CHECK_THROWS_WITH_AS(triple_cone(in),
                         doctest::Contains("chain square (sigma) fails at position 1"),
                         detk::Error);
}

TEST_CASE("triple cone: shape mismatches are named") {
    auto F = CoeffField::prime(32003);
    auto ring = make_poly_ring(2, F);
    TripleConeInput in;
    in.Q = one_term(ring, {0});
    in.P = one_term(ring, {0});
    in.F = one_term(ring, {0});
    in.sigma.push_back(GradedMap(ring, free_module({0}), free_module({2})));
    in.tau.push_back(GradedMap(ring, free_module({0}), free_module({0})));
    in.ell.push_back(GradedMap(ring, free_module({0}), free_module({})));
    CHECK_THROWS_WITH_AS(triple_cone(in), doctest::Contains("sigma[0] target is not P_0"),
                         detk::Error);
}

TEST_CASE("dual-side splice identities hold across shapes, including degenerate entries") {
    auto F = CoeffField::prime(32003);

    // linear explicit, linear generic, and mixed-degree generic shapes
    CHECK(verify_dual_top_identities(twisted_cubic(F)) == kDualNames);
    CHECK(verify_dual_top_identities(generic_linear(F, 2, 2, 3, 11)) == kDualNames);
    CHECK(verify_dual_top_identities(generic_linear(F, 2, 3, 4, 5)) == kDualNames);
    CHECK(verify_dual_top_identities(generic_linear(F, 3, 2, 4, 7)) == kDualNames);

    {
        auto dm = make_degree_matrix(2, 2, 3, {1, 1, 2}, {0, 0}, true);
        CHECK(verify_dual_top_identities(build_matrix(F, dm, GenericRandom{3})) ==
              kDualNames);
    }
    {
        auto dm = make_degree_matrix(2, 3, 4, {2, 2, 3, 3}, {0, 1}, true);
        CHECK(verify_dual_top_identities(build_matrix(F, dm, GenericRandom{9})) ==
              kDualNames);
    }
    {
        // one-row matrices: the empty-minor edge of the insertion map
        auto dm = make_degree_matrix(1, 3, 3, {1, 1, 1}, {0}, true);
        CHECK(verify_dual_top_identities(build_matrix(F, dm, GenericRandom{13})) ==
              kDualNames);
    }
    {
        // zero entries and repeated variables: the identities are universal
        auto dm = make_degree_matrix(2, 2, 3, {1, 1, 1}, {0, 0}, true);
        ExplicitEntries entries{{{"x0", "x1", "0"}, {"x1", "x0", "x2"}}};
        CHECK(verify_dual_top_identities(build_matrix(F, dm, entries)) == kDualNames);
    }

    // identities also hold over the rationals
    auto Q = CoeffField::rationals();
    auto dmq = make_degree_matrix(2, 2, 3, {1, 1, 1}, {0, 0}, true);
    ExplicitEntries eq{{{"x0", "x1", "x2"}, {"x1", "x2", "x3"}}};
    CHECK(verify_dual_top_identities(build_matrix(Q, dmq, eq)) == kDualNames);
}

TEST_CASE("comparison diagram verifies at every level of the twisted cubic") {
    auto F = CoeffField::prime(32003);
    auto s = twisted_cubic(F);

    auto d1 = comparison_diagram(s, 1);
    CHECK(d1.gate.passed());
    CHECK(d1.q_origin == "spliced complex at level 0 (build_D)");
    CHECK(d1.verified.size() == 7);
    CHECK(cxs::betti(d1.input.Q) ==
          table_of({{{0, 0}, 1}, {{1, 2}, 3}, {{2, 3}, 2}}));

    auto d2 = comparison_diagram(s, 2);
    CHECK(d2.q_origin == "spliced complex at level 1 (build_D)");
    CHECK(cxs::betti(d2.input.Q) ==
          table_of({{{0, 0}, 2}, {{1, 1}, 3}, {{2, 3}, 1}}));

    auto d0 = comparison_diagram(s, 0);
    CHECK(d0.q_origin.find("strand-built") != std::string::npos);
    // the dual module of the cubic is generated by three degree-1 elements
    CHECK(d0.input.Q.term(0).twists == std::vector<std::int64_t>{1, 1, 1});
    bool windowed = false;
    for (const auto& note : d0.input.Q.notes)
        windowed = windowed || note.find("syzygy completeness") != std::string::npos;
    CHECK(windowed);

    CHECK_THROWS_AS(comparison_diagram(s, -1), detk::Error);
    CHECK_THROWS_AS(comparison_diagram(s, 3), detk::Error);
}

TEST_CASE("comparison diagram verifies on mixed-degree and degenerate shapes") {
    auto F = CoeffField::prime(32003);
    {
        auto dm = make_degree_matrix(2, 2, 3, {1, 1, 2}, {0, 0}, true);
        auto s = build_matrix(F, dm, GenericRandom{3});
        for (int i : {1, 2}) CHECK(comparison_diagram(s, i).verified.size() == 7);
    }
    {
        auto dm = make_degree_matrix(2, 2, 3, {2, 2, 3}, {0, 1}, true);
        auto s = build_matrix(F, dm, GenericRandom{9});
        CHECK(comparison_diagram(s, 1).verified.size() == 7);
    }
    {
        // degenerate entries: the chain-level identities are still exact
        auto dm = make_degree_matrix(2, 2, 3, {1, 1, 1}, {0, 0}, true);
        ExplicitEntries entries{{{"x0", "x1", "0"}, {"x1", "x0", "x2"}}};
        auto s = build_matrix(F, dm, entries);
        CHECK(comparison_diagram(s, 1).verified.size() == 7);
    }
}

TEST_CASE("transport constants of the top column maps") {
    auto F = CoeffField::prime(32003);
    for (auto& s : {twisted_cubic(F), generic_linear(F, 2, 3, 4, 21),
                    generic_linear(F, 3, 2, 4, 22)}) {
        int t = s.degrees.t, c = s.degrees.c, nn = s.degrees.ncols();
        auto diag = comparison_diagram(s, c - 1);

        // top sigma is (-1)^{t+1} times the identity in the tail bases
        const GradedMap& top = diag.input.sigma[std::size_t(c)];
        GradedMap expect(s.ring, top.source(), top.target());
        for (int m = 0; m < t; ++m) expect.set(m, m, sign_poly(s.ring, t + 1));
        CHECK(top.equals(expect));

        // the top differential of Q transported through the wedge pairing is
        // (-1)^{t+c} phi
        const GradedMap& dq = diag.input.Q.diff(c);
        std::vector<int> all(static_cast<std::size_t>(nn));
        for (int j = 0; j < nn; ++j) all[std::size_t(j)] = j;
        for (int m = 0; m < t; ++m)
            for (int j = 0; j < nn; ++j) {
                std::vector<int> rest;
                for (int l : all)
                    if (l != j) rest.push_back(l);
                int sg = shuffle_sign(rest, {j});
                Polynomial lhs = dq.at(tuple_index(nn, rest), m)
                                     .scaled(sg == 1 ? F.one() : F.neg(F.one()));
                Polynomial rhs = s.phi.at(m, j).scaled(
                    ((t + c) % 2 == 0) ? F.one() : F.neg(F.one()));
                CHECK(lhs.equals(rhs));
            }
    }
}

TEST_CASE("Ext resolution of the cubic at the Ulrich level: raw cone and minimization") {
    auto F = CoeffField::prime(32003);
    auto s = twisted_cubic(F);
    auto res = ext1_resolution(s, 1);

    CHECK(res.gate.passed());
    CHECK(res.length == 2);
    CHECK(res.depth_estimate == 2);

    // raw cone: Q_{k-2} (+) P_{k-1} (+) F_k with the spliced-complex twists
    CHECK(res.raw == table_of({{{0, -1}, 6},
                               {{1, 0}, 13},
                               {{2, 0}, 1},
                               {{2, 1}, 6},
                               {{2, 2}, 3},
                               {{3, 2}, 3},
                               {{3, 3}, 2},
                               {{4, 3}, 2}}));
    CHECK(res.minimized == table_of({{{0, -1}, 6}, {{1, 0}, 12}, {{2, 1}, 6}}));

    // split-off bookkeeping: the constant-rank cancellations name their blocks
    REQUIRE(res.provenance.size() == 4);
    CHECK(res.provenance[0].find("position 1") != std::string::npos);
    CHECK(res.provenance[0].find("ambiguous") != std::string::npos);
    CHECK(res.provenance[1].find("1 x R(0) from Q_0") != std::string::npos);
    CHECK(res.provenance[1].find("3 x R(-2) from F_2") != std::string::npos);
    CHECK(res.provenance[3].find("2 x R(-3) from Q_2") != std::string::npos);

    // both the raw cone and the minimized complex are exact off position 0
    CHECK(cxs::randomized_exactness(res.complex, 8, 123).passed);
    auto raw_cone = triple_cone(comparison_diagram(s, 1).input);
    CHECK(cxs::randomized_exactness(raw_cone, 6, 77).passed);
}

TEST_CASE("graded pieces of Ext^1 agree between the presentation and the cone") {
    auto F = CoeffField::prime(32003);
    auto s = twisted_cubic(F);

    auto dims = ext1_piece_dims(s, 1, -2, 3);
    CHECK(dims == std::vector<std::int64_t>{0, 6, 12, 18, 24, 30});

    auto res = ext1_resolution(s, 1);
    auto raw_cone = triple_cone(comparison_diagram(s, 1).input);
    for (std::int64_t d = -2; d <= 3; ++d) {
        CHECK(euler_at(res.complex, d) == dims[std::size_t(d + 2)]);
        CHECK(euler_at(raw_cone, d) == dims[std::size_t(d + 2)]);
    }
}

TEST_CASE("level-c resolution keeps its rank-one top") {
    auto F = CoeffField::prime(32003);
    auto s = twisted_cubic(F);
    auto res = ext1_resolution(s, 2);
    CHECK(res.length == 4);
    CHECK(res.depth_estimate == 0);
    CHECK(res.complex.term(4).rank() == 1);
    for (std::int64_t d = -1; d <= 2; ++d)
        CHECK(euler_at(res.complex, d) == ext1_piece_dims(s, 2, d, d)[0]);
}

TEST_CASE("level-0 resolution from the strand-built dual module") {
    auto F = CoeffField::prime(32003);
    auto s = twisted_cubic(F);
    auto res = ext1_resolution(s, 0);
    CHECK(res.gate.passed());
    CHECK(res.length == 3);
    CHECK(res.depth_estimate == 1);
    CHECK(res.minimized ==
          table_of({{{0, -1}, 3}, {{1, 0}, 2}, {{1, 1}, 6}, {{2, 2}, 6}, {{3, 3}, 1}}));
    REQUIRE(res.provenance.size() == 4);
    CHECK(res.provenance[0].find("3 x R(-1) from F_1") != std::string::npos);
    CHECK(res.provenance[1].find("ambiguous: P_1, F_2") != std::string::npos);
    CHECK(res.provenance[3].find("3 x R(-3) from Q_2") != std::string::npos);
    for (std::int64_t d = -1; d <= 3; ++d)
        CHECK(euler_at(res.complex, d) == ext1_piece_dims(s, 0, d, d)[0]);
}

TEST_CASE("four-term defects vanish on a window (twisted cubic)") {
    auto F = CoeffField::prime(32003);
    auto s = twisted_cubic(F);
    for (int i : {0, 1, 2})
        for (auto& [d, defect] : four_term_defects(s, i, -2, 4)) {
            CAPTURE(i);
            CAPTURE(d);
            CHECK(defect == 0);
        }
}

TEST_CASE("the signed splice dual acts as zero on the top symmetric power") {
    auto F = CoeffField::prime(32003);
    auto s = twisted_cubic(F);
    std::string detail;
    CHECK(hom_splice_vanishes(s, -1, 3, &detail));
    CHECK(detail.empty());
    CHECK(hom_splice_vanishes(generic_linear(F, 2, 3, 4, 31), -1, 2));
}

TEST_CASE("Ulrich certificates for the three pinned shapes") {
    auto F = CoeffField::prime(32003);

    auto cert = ulrich_certificate(twisted_cubic(F));
    CHECK(cert.passed);
    CHECK(cert.a0 == 6);
    CHECK(cert.pure_linear);
    CHECK(cert.betti_row == std::vector<std::int64_t>{6, 12, 6});
    CHECK(cert.initial_dim == 6);
    CHECK(cert.below_dim == 0);
    for (const auto& item : cert.items) CHECK(item.rfind("pass: ", 0) == 0);

    auto cert23 = ulrich_certificate(generic_linear(F, 2, 3, 4, 41));
    CHECK(cert23.passed);
    CHECK(cert23.betti_row == std::vector<std::int64_t>{12, 36, 36, 12});

    auto cert32 = ulrich_certificate(generic_linear(F, 3, 2, 4, 42));
    CHECK(cert32.passed);
    CHECK(cert32.betti_row == std::vector<std::int64_t>{12, 24, 12});

    auto dm = make_degree_matrix(2, 2, 3, {1, 1, 2}, {0, 0}, true);
    CHECK_THROWS_WITH_AS(ulrich_certificate(build_matrix(F, dm, GenericRandom{3})),
                         doctest::Contains("normalized linear shape"), detk::Error);
}
