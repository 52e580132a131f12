#include <doctest.h>

#include <random>

#include "detk/linalg.hpp"

using namespace detk::la;
using detk::rings::CoeffField;
using detk::rings::FieldElem;

namespace {

DenseMat from_ints(const CoeffField& f, std::vector<std::vector<int>> rows) {
    DenseMat m(f, int(rows.size()), rows.empty() ? 0 : int(rows[0].size()));
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) m.set(i, j, f.from_int(rows[i][j]));
    return m;
}

}  // namespace

TEST_CASE("dense rank, determinant, and kernel over Q, hand-checked") {
    auto Q = CoeffField::rationals();
    auto m = from_ints(Q, {{1, 2}, {3, 4}});
    CHECK(m.rank() == 2);
    CHECK(m.determinant() == Q.from_int(-2));

    auto s = from_ints(Q, {{1, 2}, {2, 4}});
    CHECK(s.rank() == 1);
    CHECK(s.determinant() == Q.zero());

    auto row = from_ints(Q, {{1, 2, 3}});
    auto ker = row.kernel_basis();
    REQUIRE(ker.size() == 2);
    // Deterministic shape: unit at each free column (lowest-index pivots).
    CHECK(ker[0] == std::vector<FieldElem>{Q.from_int(-2), Q.one(), Q.zero()});
    CHECK(ker[1] == std::vector<FieldElem>{Q.from_int(-3), Q.zero(), Q.one()});
}

TEST_CASE("dense solve finds a solution or reports inconsistency") {
    auto Q = CoeffField::rationals();
    auto m = from_ints(Q, {{1, 2}, {3, 4}});
    auto x = m.solve({Q.from_int(5), Q.from_int(11)});
    REQUIRE(x.has_value());
    CHECK((*x)[0] == Q.from_int(1));
    CHECK((*x)[1] == Q.from_int(2));

    auto s = from_ints(Q, {{1, 2}, {2, 4}});
    CHECK_FALSE(s.solve({Q.one(), Q.zero()}).has_value());
    auto ok = s.solve({Q.one(), Q.from_int(2)});
    CHECK(ok.has_value());
}

TEST_CASE("dense product and transpose bookkeeping") {
    auto Q = CoeffField::rationals();
    auto a = from_ints(Q, {{1, 0, 2}, {0, 1, -1}});
    auto b = from_ints(Q, {{1, 1}, {2, 0}, {0, 3}});
    auto ab = a.multiply(b);
    CHECK(ab.rows() == 2);
    CHECK(ab.cols() == 2);
    CHECK(ab.at(0, 0) == Q.from_int(1));
    CHECK(ab.at(0, 1) == Q.from_int(7));
    CHECK(ab.at(1, 0) == Q.from_int(2));
    CHECK(ab.at(1, 1) == Q.from_int(-3));
    CHECK(a.transpose().transpose().multiply(b).at(0, 1) == ab.at(0, 1));
}

namespace {

// Random sparse columns over F_p, density about 1/4.
std::vector<SparseVec> random_cols(std::uint32_t nrows, int ncols, std::uint32_t p,
                                   std::mt19937_64& rng) {
    std::vector<SparseVec> cols(ncols);
    for (auto& c : cols)
        for (std::uint32_t i = 0; i < nrows; ++i)
            if (rng() % 4 == 0) c.push(i, std::uint32_t(rng() % p));
    return cols;
}

DenseMat to_dense(const CoeffField& f, std::uint32_t nrows, const std::vector<SparseVec>& cols) {
    DenseMat m(f, int(nrows), int(cols.size()));
    for (int j = 0; j < int(cols.size()); ++j)
        for (auto [i, v] : cols[j].ents) m.set(int(i), j, f.from_int(v));
    return m;
}

// Apply the column matrix to a kernel candidate and check it vanishes.
bool in_kernel(std::uint32_t nrows, const std::vector<SparseVec>& cols, const SparseVec& k,
               std::uint32_t p) {
    std::vector<std::uint64_t> acc(nrows, 0);
    for (auto [j, c] : k.ents)
        for (auto [i, v] : cols[j].ents) acc[i] += std::uint64_t(c) * v % p;
    for (auto a : acc)
        if (a % p != 0) return false;
    return true;
}

}  // namespace

TEST_CASE("sparse rank agrees with dense rank on random matrices") {
    const std::uint32_t p = 101;
    auto F = CoeffField::prime(p);
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 10; ++trial) {
        std::uint32_t nrows = 20 + rng() % 20;
        int ncols = 20 + int(rng() % 30);
        auto cols = random_cols(nrows, ncols, p, rng);
        CHECK(sparse_rank(nrows, cols, p) == to_dense(F, nrows, cols).rank());
    }
}

TEST_CASE("sparse kernel vectors annihilate the matrix and span the kernel") {
    const std::uint32_t p = 32003;
    std::mt19937_64 rng(7);
    std::uint32_t nrows = 25;
    int ncols = 40;
    auto cols = random_cols(nrows, ncols, p, rng);
    auto ker = sparse_column_kernel(nrows, cols, p);
    CHECK(ker.rank + int(ker.basis.size()) == ncols);
    for (const auto& k : ker.basis) CHECK(in_kernel(nrows, cols, k, p));
    // Kernel vectors are independent: each has a distinct top column index.
    FpSpan span(p, std::uint32_t(ncols));
    for (const auto& k : ker.basis) CHECK(span.insert(k));

    // Determinism: the same input gives the identical basis.
    auto ker2 = sparse_column_kernel(nrows, cols, p);
    REQUIRE(ker2.basis.size() == ker.basis.size());
    for (std::size_t i = 0; i < ker.basis.size(); ++i)
        CHECK(ker.basis[i].ents == ker2.basis[i].ents);
}

TEST_CASE("sparse solve matches a direct check") {
    const std::uint32_t p = 101;
    std::mt19937_64 rng(11);
    std::uint32_t nrows = 15;
    auto cols = random_cols(nrows, 12, p, rng);
    // rhs = 3*col_2 + 5*col_7 is solvable by construction.
    std::vector<std::uint64_t> acc(nrows, 0);
    for (auto [i, v] : cols[2].ents) acc[i] += 3ull * v;
    for (auto [i, v] : cols[7].ents) acc[i] += 5ull * v;
    SparseVec rhs;
    for (std::uint32_t i = 0; i < nrows; ++i) rhs.push(i, std::uint32_t(acc[i] % p));
    auto sol = sparse_solve(nrows, cols, rhs, p);
    REQUIRE(sol.has_value());
    // Verify A * sol = rhs.
    std::vector<std::uint64_t> ver(nrows, 0);
    for (auto [j, c] : sol->ents)
        for (auto [i, v] : cols[j].ents) ver[i] += std::uint64_t(c) * v % p;
    for (std::uint32_t i = 0; i < nrows; ++i) {
        std::uint64_t want = 0;
        for (auto [ri, rv] : rhs.ents)
            if (ri == i) want = rv;
        CHECK(ver[i] % p == want);
    }

    SparseVec bad;
    bad.push(0, 1);
    auto cols_zero = std::vector<SparseVec>{SparseVec{}};
    CHECK_FALSE(sparse_solve(nrows, cols_zero, bad, p).has_value());
}

TEST_CASE("span reports dependence and pivot columns stay sorted") {
    const std::uint32_t p = 7;
    FpSpan span(p, 4);
    SparseVec a, b, c;
    a.push(1, 2);
    a.push(3, 1);
    b.push(1, 4);
    b.push(3, 2);  // b = 2a
    c.push(0, 1);
    CHECK(span.insert(a));
    CHECK_FALSE(span.insert(b));
    CHECK(span.insert(c));
    CHECK(span.rank() == 2);
    auto piv = span.pivot_columns();
    REQUIRE(piv.size() == 2);
    CHECK(piv[0] == 0);
    CHECK(piv[1] == 1);
}
