#include <algorithm>

#include "detk/complexes.hpp"
#include "detk/scheme.hpp"
#include "doctest.h"

using namespace detk;
using namespace detk::rings;
using namespace detk::complexes;
using namespace detk::schemes;

namespace {

DetScheme twisted_cubic(const CoeffField& field) {
    auto dm = make_degree_matrix(2, 2, 3, {1, 1, 1}, {0, 0}, true);
    ExplicitEntries entries{{{"x0", "x1", "x2"}, {"x1", "x2", "x3"}}};
    return build_matrix(field, dm, entries);
}

// 1 x 3 matrix (x0 x1 x2) over k[x0..x3]: its spliced family contains the
// classical Koszul complex on three variables.
modules::GradedMap three_variable_row(const RingPtr& R) {
    modules::GradedMap phi(R, modules::free_module({1, 1, 1}),
                           modules::free_module({0}));
    for (int j = 0; j < 3; ++j) phi.set(0, j, Polynomial::variable(R, j));
    return phi;
}

}  // namespace

TEST_CASE("koszul differentials compose to zero") {
    auto F = CoeffField::prime(32003);
    auto dm = make_degree_matrix(2, 2, 3, {1, 1, 2}, {0, 1});
    auto s = build_matrix(F, dm, GenericRandom{11});
    for (int q = 2; q >= 1; --q) {
        for (int p = 0; p <= 2; ++p) {
            if (q - 1 >= 1) {
                auto d1 = koszul_differential(p, q, s.phi);
                auto d2 = koszul_differential(p + 1, q - 1, s.phi);
                CHECK(d2.compose(d1).is_zero());
            }
        }
    }
    auto dm3 = make_degree_matrix(3, 2, 4, {1, 1, 1, 1}, {0, 0, 0});
    auto s3 = build_matrix(F, dm3, GenericRandom{13});
    auto d1 = koszul_differential(0, 3, s3.phi);
    auto d2 = koszul_differential(1, 2, s3.phi);
    CHECK(d2.compose(d1).is_zero());
}

TEST_CASE("rank-one target: differentials are the classical Koszul matrices") {
    auto R = make_poly_ring(4, CoeffField::rationals());
    auto phi = three_variable_row(R);
    auto cx = build_C(3, phi);
    REQUIRE(cx.terms.size() == 4);
    // Position 3 -> 2: column (x2, -x1, x0) against targets y{0,1}, y{0,2}, y{1,2}.
    const auto& d3 = cx.diff(3);
    CHECK(d3.at(0, 0).to_string() == "x2");
    CHECK(d3.at(1, 0).to_string() == "-x1");
    CHECK(d3.at(2, 0).to_string() == "x0");
    // Position 2 -> 1: the classical 3x3 Koszul matrix.
    const auto& d2 = cx.diff(2);
    CHECK(d2.at(0, 0).to_string() == "-x1");
    CHECK(d2.at(1, 0).to_string() == "x0");
    CHECK(d2.at(2, 0).is_zero());
    CHECK(d2.at(0, 1).to_string() == "-x2");
    CHECK(d2.at(1, 1).is_zero());
    CHECK(d2.at(2, 1).to_string() == "x0");
    CHECK(d2.at(0, 2).is_zero());
    CHECK(d2.at(1, 2).to_string() == "-x2");
    CHECK(d2.at(2, 2).to_string() == "x1");
    // Position 1 -> 0: the row of entries.
    const auto& d1 = cx.diff(1);
    CHECK(d1.at(0, 0).to_string() == "x0");
    CHECK(d1.at(0, 1).to_string() == "x1");
    CHECK(d1.at(0, 2).to_string() == "x2");
}

TEST_CASE("C-complex shapes: C_0, C_1, C_2") {
    auto s = twisted_cubic(CoeffField::rationals());
    auto c0 = build_C(0, s.phi);
    CHECK(c0.terms.size() == 1);
    CHECK(c0.term(0).to_string() == "R(0)");

    auto c1 = build_C(1, s.phi);
    CHECK(c1.term(1).twists == std::vector<std::int64_t>{1, 1, 1});
    CHECK(c1.term(0).twists == std::vector<std::int64_t>{0, 0});
    // The differential is the matrix itself.
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j) CHECK(c1.diff(1).at(i, j).equals(s.entry(i, j)));

    auto c2 = build_C(2, s.phi);
    CHECK(c2.term(2).rank() == 3);  // wedge^2 of rank 3
    CHECK(c2.term(1).rank() == 6);  // F (x) G
    CHECK(c2.term(0).rank() == 3);  // S_2 of rank 2
}

TEST_CASE("splice at the bottom reproduces the minor ideal generators") {
    auto s = twisted_cubic(CoeffField::rationals());
    auto eps = splice_map(0, s.phi);
    REQUIRE(eps.rows() == 1);
    REQUIRE(eps.cols() == 3);
    for (int j = 0; j < 3; ++j) CHECK(eps.at(0, j).equals(s.minor_ideal_gens[j]));
}

TEST_CASE("spliced family for the twisted cubic: frozen shape and grid") {
    auto s = twisted_cubic(CoeffField::rationals());
    auto d0 = build_D(0, s.phi);
    auto table = betti(d0);
    BettiTable expect;
    expect.beta[{0, 0}] = 1;
    expect.beta[{1, 2}] = 3;
    expect.beta[{2, 3}] = 2;
    CHECK(table == expect);
    CHECK(table.to_grid() == "     0 1 2\n  0: 1 . .\n  1: . 3 2\n");
    CHECK(d0.to_string() == "R(-3)^2 -> R(-2)^3 -> R(0)");

    // Rank-2 cokernel family member: G at 0, F at 1, a rank-one top.
    auto d1 = build_D(1, s.phi);
    BettiTable expect1;
    expect1.beta[{0, 0}] = 2;
    expect1.beta[{1, 1}] = 3;
    expect1.beta[{2, 3}] = 1;
    CHECK(betti(d1) == expect1);
}

TEST_CASE("family index edges: -1, c, beyond c") {
    auto s = twisted_cubic(CoeffField::rationals());
    auto dm1 = build_D(-1, s.phi);  // pure tail
    CHECK(dm1.terms.size() == 3);
    CHECK(dm1.term(0).twists == std::vector<std::int64_t>{1, 1, 1});
    CHECK(dm1.term(1).rank() == 6);
    CHECK(dm1.term(2).rank() == 3);
    CHECK_THROWS(build_D(-2, s.phi));

    auto dc = build_D(2, s.phi);
    auto cc = build_C(2, s.phi);
    CHECK(betti(dc) == betti(cc));
    CHECK(dc.notes.empty());

    auto dbig = build_D(3, s.phi);
    REQUIRE(!dbig.notes.empty());
    CHECK(dbig.notes[0].find("conditional") != std::string::npos);
}

TEST_CASE("spliced family builds and is zero-composed across a (t,c,i) grid") {
    auto F = CoeffField::prime(32003);
    struct Shape {
        int t, c, n;
        std::vector<std::int64_t> a, b;
    };
    std::vector<Shape> shapes = {
        {2, 2, 3, {1, 1, 1}, {0, 0}},       // linear
        {2, 2, 3, {1, 1, 2}, {0, 0}},       // mixed
        {2, 3, 4, {1, 1, 1, 1}, {0, 0}},    // linear, c=3
        {2, 3, 4, {1, 2, 2, 2}, {0, 0}},    // mixed, c=3
        {3, 2, 4, {1, 1, 1, 1}, {0, 0, 0}},  // t=3
        {3, 3, 5, {1, 1, 1, 1, 1}, {0, 0, 0}},
        {2, 4, 5, {1, 1, 1, 1, 1}, {0, 0}},  // c=4
    };
    std::uint64_t seed = 1000;
    for (const auto& sh : shapes) {
        auto dm = make_degree_matrix(sh.t, sh.c, sh.n, sh.a, sh.b);
        auto s = build_matrix(F, dm, GenericRandom{seed++});
        for (int i = -1; i <= sh.c; ++i) {
            auto d = build_D(i, s.phi);  // validates d(d(x)) = 0 internally
            CHECK(d.terms.size() >= 1);
        }
    }
}

TEST_CASE("randomized exactness holds for generic spliced complexes") {
    auto F = CoeffField::prime(32003);
    auto dm = make_degree_matrix(2, 3, 4, {1, 1, 2, 2}, {0, 0});
    auto s = build_matrix(F, dm, GenericRandom{77});
    for (int i = -1; i <= 3; ++i) {
        auto rep = randomized_exactness(build_D(i, s.phi), 10, 42);
        CHECK(rep.passed);
    }
    auto rep = randomized_exactness(build_D(0, twisted_cubic(F).phi), 10, 7);
    CHECK(rep.passed);
    CHECK(rep.label() == "randomized(10 points, field F_32003, seed 7)");
}

TEST_CASE("hilbert data from resolutions") {
    auto s = twisted_cubic(CoeffField::rationals());
    auto h = hilbert_from_resolution(build_D(0, s.phi), 3, 10);
    // Numerator 1 - 3z^2 + 2z^3.
    REQUIRE(h.numerator.size() == 3);
    CHECK(h.numerator.at(0) == 1);
    CHECK(h.numerator.at(2) == -3);
    CHECK(h.numerator.at(3) == 2);
    CHECK(h.denom_exponent == 4);
    CHECK(h.value_at(0) == 1);
    for (std::int64_t d = 1; d <= 10; ++d) CHECK(h.value_at(d) == 3 * d + 1);
    REQUIRE(h.table.size() == 11);
    CHECK(h.table[4] == std::pair<std::int64_t, std::int64_t>{4, 13});

    // Complete intersection of type (2,3): numerator (1-z^2)(1-z^3).
    auto R = make_poly_ring(3, CoeffField::rationals());
    modules::GradedMap row(R, modules::free_module({2, 3}), modules::free_module({0}));
    row.set(0, 0, parse_polynomial(R, "x0^2"));
    row.set(0, 1, parse_polynomial(R, "x1^2*x2"));
    auto hci = hilbert_from_resolution(build_D(0, row), 2, 8);
    REQUIRE(hci.numerator.size() == 4);
    CHECK(hci.numerator.at(0) == 1);
    CHECK(hci.numerator.at(2) == -1);
    CHECK(hci.numerator.at(3) == -1);
    CHECK(hci.numerator.at(5) == 1);

    // Alternating rank sum vanishes for a resolution of positive codimension.
    std::int64_t alt = 0;
    auto d0 = build_D(0, s.phi);
    for (int k = 0; k < int(d0.terms.size()); ++k)
        alt += (k % 2 == 0 ? 1 : -1) * d0.terms[k].rank();
    CHECK(alt == 0);
}

TEST_CASE("minimize: unit cancellation, idempotence, exactness preservation") {
    auto Q = CoeffField::rationals();
    auto s = twisted_cubic(Q);
    auto d0 = build_D(0, s.phi);
    auto m = minimize(d0);
    CHECK(betti(m) == betti(d0));  // already minimal

    // Identity cone collapses to nothing.
    auto R = make_poly_ring(2, Q);
    ChainComplex cone;
    cone.ring = R;
    cone.terms = {modules::free_module({2}), modules::free_module({2})};
    modules::GradedMap one(R, cone.terms[1], cone.terms[0]);
    one.set(0, 0, Polynomial::constant(R, Q.one()));
    cone.diffs = {one};
    auto dead = minimize(cone);
    CHECK(dead.term(0).rank() == 0);
    CHECK(dead.term(1).rank() == 0);
    CHECK(betti(dead).beta.empty());

    // A mixed complex: R(0)+R(-1) at the bottom, R(-1) above, with a unit row.
    ChainComplex mixed;
    mixed.ring = R;
    mixed.terms = {modules::free_module({0, 1}), modules::free_module({1})};
    modules::GradedMap dmap(R, mixed.terms[1], mixed.terms[0]);
    dmap.set(0, 0, Polynomial::variable(R, 0));
    dmap.set(1, 0, Polynomial::constant(R, Q.one()));
    mixed.diffs = {dmap};
    auto mm = minimize(mixed);
    BettiTable left;
    left.beta[{0, 0}] = 1;
    CHECK(betti(mm) == left);
    auto again = minimize(mm);
    CHECK(betti(again) == betti(mm));

    // Direct sum with a trivial pair: minimize recovers the original shape and
    // keeps randomized exactness.
    auto F = CoeffField::prime(32003);
    auto sf = twisted_cubic(F);
    auto base = build_D(0, sf.phi);
    ChainComplex padded;
    padded.ring = base.ring;
    padded.terms = base.terms;
    padded.terms[1].twists.push_back(2);
    padded.terms[2].twists.push_back(2);
    modules::GradedMap nd1(padded.ring, padded.terms[1], padded.terms[0]);
    for (int j = 0; j < 3; ++j) nd1.set(0, j, base.diffs[0].at(0, j));
    modules::GradedMap nd2(padded.ring, padded.terms[2], padded.terms[1]);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 2; ++j) nd2.set(i, j, base.diffs[1].at(i, j));
    nd2.set(3, 2, Polynomial::constant(padded.ring, F.one()));
    padded.diffs = {nd1, nd2};
    padded.validate();
    auto back = minimize(padded);
    CHECK(betti(back) == betti(base));
    CHECK(randomized_exactness(back, 10, 3).passed);
}

TEST_CASE("dualize_shift: involution, pairing across the family, self-duality") {
    auto F = CoeffField::prime(32003);

    // Involution with the same twist.
    auto s = twisted_cubic(F);
    auto d0 = build_D(0, s.phi);
    auto round = dualize_shift(dualize_shift(d0, 5), 5);
    CHECK(betti(round) == betti(d0));
    for (std::size_t k = 0; k < d0.diffs.size(); ++k)
        CHECK(round.diffs[k].equals(d0.diffs[k]));

    // Pairing D_k^*(ell) against D_{c-1-k} across shapes.
    struct Shape {
        int t, c, n;
        std::vector<std::int64_t> a, b;
    };
    std::vector<Shape> shapes = {
        {2, 2, 3, {1, 1, 2}, {0, 0}},
        {2, 3, 4, {1, 1, 1, 1}, {0, 0}},
        {3, 2, 4, {1, 1, 1, 1}, {0, 0, 0}},
    };
    std::uint64_t seed = 50;
    for (const auto& sh : shapes) {
        auto dm = make_degree_matrix(sh.t, sh.c, sh.n, sh.a, sh.b);
        auto sch = build_matrix(F, dm, GenericRandom{seed++});
        for (int k = -1; k <= sh.c; ++k) {
            auto lhs = betti(dualize_shift(build_D(k, sch.phi), sch.ell));
            auto rhs = betti(build_D(sh.c - 1 - k, sch.phi));
            CHECK(lhs == rhs);
        }
    }

    // Self-duality at the middle index for odd c.
    auto dm23 = make_degree_matrix(2, 3, 4, {1, 1, 1, 1}, {0, 0});
    auto s23 = build_matrix(F, dm23, GenericRandom{99});
    auto mid = build_D(1, s23.phi);
    CHECK(betti(dualize_shift(mid, s23.ell)) == betti(mid));
}
