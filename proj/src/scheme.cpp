#include "detk/scheme.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <utility>

#include "detk/common.hpp"

namespace detk::schemes {

using modules::free_module;
using modules::GradedMap;
using modules::increasing_tuples;

std::int64_t DegreeMatrix::ell() const {
    std::int64_t s = 0;
    for (auto aj : a) s = checked_add(s, aj);
    for (auto bi : b) s = checked_add(s, -bi);
    return s;
}

void DegreeMatrix::validate() const {
    require(t >= 1, "degree matrix needs t >= 1, got t=", t);
    require(c >= 1, "degree matrix needs c >= 1, got c=", c);
    require(n >= c, "degree matrix needs n >= c, got n=", n, ", c=", c);
    require(int(a.size()) == t + c - 1, "expected ", t + c - 1, " column degrees, got ",
            a.size());
    require(int(b.size()) == t, "expected ", t, " row degrees, got ", b.size());
    require(std::is_sorted(a.begin(), a.end()), "column degrees must be ascending");
    require(std::is_sorted(b.begin(), b.end()), "row degrees must be ascending");
    if (positive_entries) {
        for (int i = 0; i < t; ++i) {
            for (int j = 0; j < ncols(); ++j) {
                require(entry_degree(i, j) > 0, "positive-entries flag violated at row ", i,
                        ", column ", j, ": degree ", entry_degree(i, j));
            }
        }
    }
}

DegreeMatrix make_degree_matrix(int t, int c, int n, std::vector<std::int64_t> a,
                                std::vector<std::int64_t> b, bool positive_entries) {
    DegreeMatrix dm;
    dm.t = t;
    dm.c = c;
    dm.n = n;
    dm.a = std::move(a);
    dm.b = std::move(b);
    dm.positive_entries = positive_entries;
    std::sort(dm.a.begin(), dm.a.end());
    std::sort(dm.b.begin(), dm.b.end());
    dm.validate();
    return dm;
}

DegreeMatrix degree_matrix_from_grid(const std::vector<std::vector<std::int64_t>>& grid,
                                     int n, bool positive_entries) {
    require(!grid.empty(), "degree grid has no rows");
    const int t = int(grid.size());
    const int ncols = int(grid[0].size());
    require(ncols >= t, "degree grid needs at least t columns, got ", ncols, " for t=", t);
    for (int i = 0; i < t; ++i) {
        require(int(grid[i].size()) == ncols, "degree grid row ", i, " has ",
                grid[i].size(), " entries, expected ", ncols);
    }
    // Rank-one consistency: row i must differ from row 0 by a constant.
    for (int i = 1; i < t; ++i) {
        std::int64_t shift = grid[i][0] - grid[0][0];
        for (int j = 1; j < ncols; ++j) {
            require(grid[i][j] - grid[0][j] == shift, "degree grid is inconsistent at row ",
                    i, ", column ", j, ": expected ", grid[0][j] + shift, ", got ",
                    grid[i][j]);
        }
    }
    // Normalize b_0 = 0 against the *unsorted* first row, then sort.
    std::vector<std::int64_t> a(grid[0].begin(), grid[0].end());
    std::vector<std::int64_t> b(t);
    for (int i = 0; i < t; ++i) b[i] = grid[0][0] - grid[i][0];
    std::int64_t bmin = *std::min_element(b.begin(), b.end());
    for (auto& bi : b) bi -= bmin;
    for (auto& aj : a) aj -= bmin;
    return make_degree_matrix(t, ncols - t + 1, n, std::move(a), std::move(b),
                              positive_entries);
}

namespace {

// det of phi restricted to `rows` x `cols` (bitmask form), Laplace expansion
// along the highest remaining row, memoized on (rowmask, colmask).
const Polynomial& memo_det(const GradedMap& phi, std::uint32_t rowmask,
                           std::uint32_t colmask,
                           std::map<std::uint64_t, Polynomial>& memo) {
    const std::uint64_t key = (std::uint64_t(rowmask) << 32) | colmask;
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;

    const RingPtr& ring = phi.ring();
    Polynomial det(ring);
    if (rowmask == 0) {
        det = Polynomial::constant(ring, ring->field().one());
    } else {
        const int row = 31 - __builtin_clz(rowmask);  // highest set row
        const std::uint32_t rest_rows = rowmask & ~(1u << row);
        const int size = __builtin_popcount(rowmask);
        int colpos = 0;
        bool plus = ((size - 1) % 2) == 0;  // sign of (-1)^{(size-1)+colpos}
        for (std::uint32_t cm = colmask; cm != 0; ++colpos, plus = !plus) {
            const int col = __builtin_ctz(cm);
            cm &= cm - 1;
            const Polynomial& e = phi.at(row, col);
            if (e.is_zero()) continue;
            const Polynomial& sub =
                memo_det(phi, rest_rows, colmask & ~(1u << col), memo);
            Polynomial piece = e * sub;
            det = plus ? det + piece : det - piece;
        }
    }
    return memo.emplace(key, std::move(det)).first->second;
}

std::uint32_t tuple_mask(const std::vector<int>& tup, int limit) {
    std::uint32_t m = 0;
    for (int v : tup) {
        require(v >= 0 && v < limit, "index ", v, " out of range [0, ", limit, ")");
        require(!(m & (1u << v)), "repeated index ", v, " in tuple");
        m |= 1u << v;
    }
    return m;
}

DetScheme finish_build(const RingPtr& ring, const DegreeMatrix& degrees, GradedMap phi,
                       std::string mode, bool demand_minimal) {
    bool minimal = true;
    for (int i = 0; i < degrees.t; ++i) {
        for (int j = 0; j < degrees.ncols(); ++j) {
            const Polynomial& e = phi.at(i, j);
            if (!e.is_zero() && e.degree() == 0) minimal = false;
        }
    }
    require(minimal || !demand_minimal,
            "matrix is not minimal: it has a nonzero constant entry");

    DetScheme s{ring, degrees, std::move(phi), {}, degrees.ell(), minimal,
                std::move(mode)};

    const int t = degrees.t;
    const int ncols = degrees.ncols();
    const std::uint32_t all_rows = (t == 32) ? ~0u : ((1u << t) - 1);
    std::map<std::uint64_t, Polynomial> memo;
    for (const auto& cols : increasing_tuples(ncols, t)) {
        Polynomial m = memo_det(s.phi, all_rows, tuple_mask(cols, ncols), memo);
        if (!m.is_zero()) {
            std::int64_t want = 0;
            for (int j : cols) want = checked_add(want, degrees.a[j]);
            for (auto bi : degrees.b) want = checked_add(want, -bi);
            require(m.degree() == want, "minor on columns {", join(cols, ","),
                    "} has degree ", m.degree(), ", expected ", want);
        }
        s.minor_ideal_gens.push_back(std::move(m));
    }
    require(std::int64_t(s.minor_ideal_gens.size()) == binomial(ncols, t),
            "minor count mismatch");
    return s;
}

}  // namespace

DetScheme build_matrix(const RingPtr& ring, const DegreeMatrix& degrees,
                       const GenericRandom& mode, bool demand_minimal) {
    degrees.validate();
    require(ring->nvars() == degrees.n + 1, "ring has ", ring->nvars(),
            " variables, expected n+1 = ", degrees.n + 1);
    require(ring->field().kind() == rings::FieldKind::prime,
            "generic matrices need a prime field");
    std::mt19937_64 rng(mode.seed);
    GradedMap phi(ring, free_module(degrees.a), free_module(degrees.b));
    for (int i = 0; i < degrees.t; ++i) {
        for (int j = 0; j < degrees.ncols(); ++j) {
            std::int64_t d = degrees.entry_degree(i, j);
            if (d >= 1) phi.set(i, j, rings::random_form(ring, int(d), rng));
            // d <= 0: zero entry (keeps the matrix minimal).
        }
    }
    std::string tag = "generic(seed=" + std::to_string(mode.seed) + ")";
    return finish_build(ring, degrees, std::move(phi), std::move(tag), demand_minimal);
}

DetScheme build_matrix(const RingPtr& ring, const DegreeMatrix& degrees,
                       const ExplicitEntries& mode, bool demand_minimal) {
    degrees.validate();
    require(ring->nvars() == degrees.n + 1, "ring has ", ring->nvars(),
            " variables, expected n+1 = ", degrees.n + 1);
    require(int(mode.rows.size()) == degrees.t, "expected ", degrees.t,
            " entry rows, got ", mode.rows.size());
    GradedMap phi(ring, free_module(degrees.a), free_module(degrees.b));
    for (int i = 0; i < degrees.t; ++i) {
        require(int(mode.rows[i].size()) == degrees.ncols(), "entry row ", i, " has ",
                mode.rows[i].size(), " entries, expected ", degrees.ncols());
        for (int j = 0; j < degrees.ncols(); ++j) {
            const std::string& text = mode.rows[i][j];
            if (text.empty() || text == "0") continue;
            Polynomial p = rings::parse_polynomial(ring, text);
            if (p.is_zero()) continue;
            std::int64_t want = degrees.entry_degree(i, j);
            require(p.degree() == want, "entry at row ", i, ", column ", j, " (\"", text,
                    "\") has degree ", p.degree(), ", expected ", want);
            phi.set(i, j, std::move(p));
        }
    }
    return finish_build(ring, degrees, std::move(phi), "explicit", demand_minimal);
}

DetScheme build_matrix(const RingPtr& ring, const DegreeMatrix& degrees,
                       const PolynomialEntries& mode, bool demand_minimal) {
    degrees.validate();
    require(ring->nvars() == degrees.n + 1, "ring has ", ring->nvars(),
            " variables, expected n+1 = ", degrees.n + 1);
    require(int(mode.rows.size()) == degrees.t, "expected ", degrees.t,
            " entry rows, got ", mode.rows.size());
    GradedMap phi(ring, free_module(degrees.a), free_module(degrees.b));
    for (int i = 0; i < degrees.t; ++i) {
        require(int(mode.rows[i].size()) == degrees.ncols(), "entry row ", i, " has ",
                mode.rows[i].size(), " entries, expected ", degrees.ncols());
        for (int j = 0; j < degrees.ncols(); ++j) {
            const Polynomial& p = mode.rows[i][j];
            if (p.is_zero()) continue;
            require(p.ring().get() == ring.get(), "entry at row ", i, ", column ", j,
                    " lives in a different ring");
            std::int64_t want = degrees.entry_degree(i, j);
            require(p.degree() == want, "entry at row ", i, ", column ", j,
                    " has degree ", p.degree(), ", expected ", want);
            phi.set(i, j, p);
        }
    }
    return finish_build(ring, degrees, std::move(phi), mode.tag, demand_minimal);
}

DetScheme build_matrix(const CoeffField& field, const DegreeMatrix& degrees,
                       const GenericRandom& mode, bool demand_minimal) {
    return build_matrix(rings::make_poly_ring(degrees.n + 1, field), degrees, mode,
                        demand_minimal);
}

DetScheme build_matrix(const CoeffField& field, const DegreeMatrix& degrees,
                       const ExplicitEntries& mode, bool demand_minimal) {
    return build_matrix(rings::make_poly_ring(degrees.n + 1, field), degrees, mode,
                        demand_minimal);
}

Polynomial minor_of(const DetScheme& s, const std::vector<int>& rows,
                    const std::vector<int>& cols) {
    require(rows.size() == cols.size(), "minor needs equal row and column counts");
    std::map<std::uint64_t, Polynomial> memo;
    return memo_det(s.phi, tuple_mask(rows, s.degrees.t),
                    tuple_mask(cols, s.degrees.ncols()), memo);
}

std::vector<Polynomial> submaximal_minors(const DetScheme& s) {
    const int t = s.degrees.t;
    require(t >= 2, "submaximal minors need t >= 2, got t=", t);
    std::vector<Polynomial> out;
    std::map<std::uint64_t, Polynomial> memo;
    for (const auto& rows : increasing_tuples(t, t - 1)) {
        std::uint32_t rowmask = tuple_mask(rows, t);
        std::int64_t bsum = 0;
        for (int i : rows) bsum = checked_add(bsum, s.degrees.b[i]);
        for (const auto& cols : increasing_tuples(s.degrees.ncols(), t - 1)) {
            Polynomial m =
                memo_det(s.phi, rowmask, tuple_mask(cols, s.degrees.ncols()), memo);
            if (!m.is_zero()) {
                std::int64_t want = -bsum;
                for (int j : cols) want = checked_add(want, s.degrees.a[j]);
                require(m.degree() == want, "submaximal minor degree mismatch");
            }
            out.push_back(std::move(m));
        }
    }
    return out;
}

ExpectedInvariants expected_invariants(const DegreeMatrix& degrees) {
    degrees.validate();
    ExpectedInvariants inv;
    inv.codim_I = degrees.c;
    inv.codim_J_generic = int(std::min<std::int64_t>(2 * (degrees.c + 1), degrees.n + 1));
    inv.ell = degrees.ell();
    bool all_linear = true;
    for (int i = 0; i < degrees.t && all_linear; ++i) {
        for (int j = 0; j < degrees.ncols(); ++j) {
            if (degrees.entry_degree(i, j) != 1) {
                all_linear = false;
                break;
            }
        }
    }
    if (all_linear) inv.deg_linear = binomial(degrees.ncols(), degrees.c);
    return inv;
}

PointSearch random_point_on_complement(const DetScheme& s, Locus which, int trials,
                                       std::uint64_t seed) {
    const auto& field = s.ring->field();
    require(field.kind() == rings::FieldKind::prime,
            "point sampling needs a prime field");
    require(trials >= 1, "need at least one trial");
    const std::vector<Polynomial> gens = (which == Locus::maximal_minors)
                                             ? s.minor_ideal_gens
                                             : submaximal_minors(s);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::int64_t> dist(0, field.characteristic() - 1);
    PointSearch result;
    for (int trial = 1; trial <= trials; ++trial) {
        result.trials_used = trial;
        std::vector<FieldElem> pt(s.degrees.n + 1);
        bool all_zero = true;
        for (auto& coord : pt) {
            coord = field.from_int(dist(rng));
            if (!field.is_zero(coord)) all_zero = false;
        }
        if (all_zero) continue;
        bool ok = true;
        for (const auto& g : gens) {
            if (field.is_zero(g.eval(pt))) {
                ok = false;
                break;
            }
        }
        if (ok) {
            result.found = true;
            result.point = std::move(pt);
            return result;
        }
    }
    return result;
}

}  // namespace detk::schemes
