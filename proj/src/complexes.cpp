#include "detk/complexes.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "detk/common.hpp"
#include "detk/linalg.hpp"

namespace detk::complexes {

using modules::exponent_index;
using modules::exponent_vectors;
using modules::exterior_power;
using modules::free_module;
using modules::increasing_tuples;
using modules::shuffle_sign;
using modules::symmetric_power;
using modules::tensor;
using modules::tuple_index;
using rings::FieldElem;

// ---- ChainComplex basics ---------------------------------------------------

const GradedFreeModule& ChainComplex::term(int i) const {
    require(i >= lo && i <= hi(), "term index ", i, " outside [", lo, ", ", hi(), "]");
    return terms[i - lo];
}

const GradedMap& ChainComplex::diff(int i) const {
    require(i > lo && i <= hi(), "no differential leaves position ", i);
    return diffs[i - lo - 1];
}

void ChainComplex::validate() const {
    require(terms.size() == diffs.size() + 1 || (terms.size() <= 1 && diffs.empty()),
            "complex shape mismatch: ", terms.size(), " terms, ", diffs.size(),
            " differentials");
    for (std::size_t k = 0; k + 1 < diffs.size(); ++k) {
        require(diffs[k].compose(diffs[k + 1]).is_zero(),
                "d(d(x)) != 0 between positions ", lo + int(k) + 2, " and ", lo + int(k));
    }
}

std::string ChainComplex::to_string() const {
    std::string s;
    for (int k = int(terms.size()) - 1; k >= 0; --k) {
        s += terms[k].to_string();
        if (k > 0) s += " -> ";
    }
    return s;
}

// ---- Betti / Hilbert -------------------------------------------------------

BettiTable betti(const ChainComplex& cx) {
    BettiTable out;
    for (int k = 0; k < int(cx.terms.size()); ++k) {
        for (auto w : cx.terms[k].twists) ++out.beta[{cx.lo + k, w}];
    }
    return out;
}

std::string BettiTable::to_grid() const {
    if (beta.empty()) return "(empty)\n";
    int imin = beta.begin()->first.first, imax = imin;
    std::int64_t rmin = 0, rmax = 0;
    bool first = true;
    for (const auto& [key, count] : beta) {
        (void)count;
        imin = std::min(imin, key.first);
        imax = std::max(imax, key.first);
        std::int64_t r = key.second - key.first;
        if (first) {
            rmin = rmax = r;
            first = false;
        } else {
            rmin = std::min(rmin, r);
            rmax = std::max(rmax, r);
        }
    }
    std::vector<std::size_t> width(imax - imin + 1, 1);
    auto cell = [&](std::int64_t r, int i) -> std::string {
        auto it = beta.find({i, r + i});
        return it == beta.end() ? "." : std::to_string(it->second);
    };
    for (std::int64_t r = rmin; r <= rmax; ++r)
        for (int i = imin; i <= imax; ++i)
            width[i - imin] = std::max(width[i - imin],
                                       std::max(cell(r, i).size(),
                                                std::to_string(i).size()));
    std::ostringstream os;
    os << "    ";
    for (int i = imin; i <= imax; ++i) {
        os << " " << std::string(width[i - imin] - std::to_string(i).size(), ' ') << i;
    }
    os << "\n";
    for (std::int64_t r = rmin; r <= rmax; ++r) {
        std::string lab = std::to_string(r) + ":";
        os << std::string(lab.size() < 4 ? 4 - lab.size() : 0, ' ') << lab;
        for (int i = imin; i <= imax; ++i) {
            std::string c = cell(r, i);
            os << " " << std::string(width[i - imin] - c.size(), ' ') << c;
        }
        os << "\n";
    }
    return os.str();
}

std::int64_t HilbertData::value_at(std::int64_t d) const {
    std::int64_t v = 0;
    for (const auto& [j, coef] : numerator) {
        if (d - j < 0) continue;
        v = checked_add(v, checked_mul(coef, binomial(d - j + denom_exponent - 1,
                                                      denom_exponent - 1)));
    }
    return v;
}

HilbertData hilbert_from_resolution(const ChainComplex& cx, int n, std::int64_t bound) {
    HilbertData h;
    h.denom_exponent = n + 1;
    for (int k = 0; k < int(cx.terms.size()); ++k) {
        const int i = cx.lo + k;
        const std::int64_t sign = (((i % 2) + 2) % 2 == 0) ? 1 : -1;
        for (auto w : cx.terms[k].twists) h.numerator[w] += sign;
    }
    std::erase_if(h.numerator, [](const auto& kv) { return kv.second == 0; });
    for (std::int64_t d = 0; d <= bound; ++d) h.table.emplace_back(d, h.value_at(d));
    return h;
}

// ---- bases and differentials -----------------------------------------------

CTermBasis c_term_basis(const GradedMap& phi, int q, int p) {
    require(q >= 0 && p >= 0, "negative power in complex term");
    auto ext = exterior_power(phi.source(), q);
    auto sym = symmetric_power(phi.target(), p);
    CTermBasis b;
    b.mod = tensor(ext.mod, sym.mod);
    b.tuples = std::move(ext.index);
    b.exps = std::move(sym.index);
    return b;
}

TailBasis tail_basis(const GradedMap& phi, int wedge_size, int k) {
    require(wedge_size >= 0 && k >= 0, "negative power in tail term");
    const int N = phi.cols();
    const int t = phi.rows();
    const auto& a = phi.source().twists;
    const auto& b = phi.target().twists;
    std::int64_t bsum = 0;
    for (auto bi : b) bsum = checked_add(bsum, bi);

    TailBasis tb;
    tb.tuples = increasing_tuples(N, wedge_size);
    tb.exps = exponent_vectors(t, k);
    for (const auto& U : tb.tuples) {
        std::int64_t base = -bsum;
        for (int j : U) base = checked_add(base, a[j]);
        std::string ulab = "u{" + join(U, ",") + "}";
        for (const auto& beta : tb.exps) {
            std::int64_t w = base;
            for (int m = 0; m < t; ++m) w = checked_add(w, -beta[m] * b[m]);
            tb.mod.twists.push_back(w);
            tb.mod.labels.push_back(ulab + "|s{" + join(beta, ",") + "}");
        }
    }
    return tb;
}

Polynomial submatrix_det(const GradedMap& phi, const std::vector<int>& rows,
                         const std::vector<int>& cols) {
    require(rows.size() == cols.size(), "determinant needs a square submatrix");
    std::vector<std::vector<Polynomial>> block;
    for (int i : rows) {
        std::vector<Polynomial> row;
        for (int j : cols) row.push_back(phi.at(i, j));
        block.push_back(std::move(row));
    }
    return modules::poly_det(phi.ring(), int(rows.size()), block);
}

GradedMap koszul_differential(int p, int q, const GradedMap& phi) {
    require(q >= 1 && p >= 0, "koszul differential needs q >= 1, p >= 0");
    const int N = phi.cols();
    const int t = phi.rows();
    auto src = c_term_basis(phi, q, p);
    auto dst = c_term_basis(phi, q - 1, p + 1);
    GradedMap d(phi.ring(), src.mod, dst.mod);
    const auto& field = phi.ring()->field();
    for (int si = 0; si < int(src.tuples.size()); ++si) {
        const auto& S = src.tuples[si];
        for (int jj = 0; jj < q; ++jj) {
            const int j = S[jj];
            const bool neg = (jj % 2) != 0;  // (-1)^{pos(j,S)}
            std::vector<int> Srem;
            Srem.reserve(q - 1);
            for (int l = 0; l < q; ++l)
                if (l != jj) Srem.push_back(S[l]);
            const int ti = tuple_index(N, Srem);
            for (int m = 0; m < t; ++m) {
                const Polynomial& amj = phi.at(m, j);
                if (amj.is_zero()) continue;
                const Polynomial signed_amj = neg ? amj.scaled(field.neg(field.one()))
                                                  : amj;
                for (int ai = 0; ai < int(src.exps.size()); ++ai) {
                    std::vector<int> beta = src.exps[ai];
                    ++beta[m];
                    d.add_to(dst.index(ti, exponent_index(t, beta)), src.index(si, ai),
                             signed_amj);
                }
            }
        }
    }
    return d;
}

GradedMap tail_differential(const GradedMap& phi, int wedge_size, int k) {
    require(k >= 1, "tail differential needs k >= 1");
    const int N = phi.cols();
    const int t = phi.rows();
    auto src = tail_basis(phi, wedge_size, k);
    auto dst = tail_basis(phi, wedge_size - 1, k - 1);
    GradedMap d(phi.ring(), src.mod, dst.mod);
    const auto& field = phi.ring()->field();
    const bool front_neg = ((N - wedge_size) % 2) != 0;  // (-1)^{N-|U|}
    for (int ui = 0; ui < int(src.tuples.size()); ++ui) {
        const auto& U = src.tuples[ui];
        for (int jj = 0; jj < wedge_size; ++jj) {
            const int j = U[jj];
            const bool neg = front_neg != ((jj % 2) != 0);
            std::vector<int> Urem;
            Urem.reserve(wedge_size - 1);
            for (int l = 0; l < wedge_size; ++l)
                if (l != jj) Urem.push_back(U[l]);
            const int ti = tuple_index(N, Urem);
            for (int m = 0; m < t; ++m) {
                const Polynomial& amj = phi.at(m, j);
                if (amj.is_zero()) continue;
                const Polynomial signed_amj = neg ? amj.scaled(field.neg(field.one()))
                                                  : amj;
                for (int bi = 0; bi < int(src.exps.size()); ++bi) {
                    if (src.exps[bi][m] == 0) continue;
                    std::vector<int> beta = src.exps[bi];
                    --beta[m];
                    d.add_to(dst.index(ti, exponent_index(t, beta)), src.index(ui, bi),
                             signed_amj);
                }
            }
        }
    }
    return d;
}

GradedMap splice_map(int i, const GradedMap& phi) {
    const int N = phi.cols();
    const int t = phi.rows();
    const int c = N - t + 1;
    require(i >= 0 && i <= c - 1, "splice index ", i, " outside [0, ", c - 1, "]");
    auto src = tail_basis(phi, t + i, 0);
    auto dst = c_term_basis(phi, i, 0);
    GradedMap d(phi.ring(), src.mod, dst.mod);
    std::vector<int> all_rows(t);
    for (int m = 0; m < t; ++m) all_rows[m] = m;
    const auto& field = phi.ring()->field();
    for (int ui = 0; ui < int(src.tuples.size()); ++ui) {
        const auto& U = src.tuples[ui];
        for (const auto& sel : increasing_tuples(t + i, t)) {
            std::vector<int> T, comp;
            T.reserve(t);
            comp.reserve(i);
            std::size_t s = 0;
            for (int l = 0; l < t + i; ++l) {
                if (s < sel.size() && sel[s] == l) {
                    T.push_back(U[l]);
                    ++s;
                } else {
                    comp.push_back(U[l]);
                }
            }
            Polynomial det = submatrix_det(phi, all_rows, T);
            if (det.is_zero()) continue;
            if (shuffle_sign(T, comp) < 0) det = det.scaled(field.neg(field.one()));
            d.add_to(dst.index(tuple_index(N, comp), 0), src.index(ui, 0), det);
        }
    }
    return d;
}

ChainComplex build_C(int i, const GradedMap& phi) {
    require(i >= 0, "C_i needs i >= 0, got ", i);
    ChainComplex cx;
    cx.ring = phi.ring();
    cx.lo = 0;
    for (int q = 0; q <= i; ++q) cx.terms.push_back(c_term_basis(phi, q, i - q).mod);
    for (int q = 1; q <= i; ++q) cx.diffs.push_back(koszul_differential(i - q, q, phi));
    cx.validate();
    return cx;
}

ChainComplex build_D(int i, const GradedMap& phi) {
    const int N = phi.cols();
    const int t = phi.rows();
    const int c = N - t + 1;
    require(i >= -1, "D_i needs i >= -1, got ", i);
    require(c >= 1, "phi must have at least as many columns as rows");
    if (i >= c) {
        ChainComplex cx = build_C(i, phi);
        if (i > c)
            cx.notes.push_back(
                "conditional: index beyond the spliced range; acyclicity needs the "
                "sampled depth hypothesis");
        return cx;
    }
    ChainComplex cx;
    cx.ring = phi.ring();
    cx.lo = 0;
    for (int q = 0; q <= i; ++q) cx.terms.push_back(c_term_basis(phi, q, i - q).mod);
    for (int k = 0; k <= c - 1 - i; ++k)
        cx.terms.push_back(tail_basis(phi, t + i + k, k).mod);
    for (int q = 1; q <= i; ++q) cx.diffs.push_back(koszul_differential(i - q, q, phi));
    if (i >= 0) cx.diffs.push_back(splice_map(i, phi));
    for (int k = 1; k <= c - 1 - i; ++k)
        cx.diffs.push_back(tail_differential(phi, t + i + k, k));
    cx.validate();
    return cx;
}

// ---- minimize ---------------------------------------------------------------

namespace {

GradedFreeModule drop_index(const GradedFreeModule& m, int idx) {
    GradedFreeModule out;
    for (int i = 0; i < m.rank(); ++i) {
        if (i == idx) continue;
        out.twists.push_back(m.twists[i]);
        if (!m.labels.empty()) out.labels.push_back(m.labels[i]);
    }
    return out;
}

GradedMap rebuild(const RingPtr& ring, const GradedFreeModule& src,
                  const GradedFreeModule& dst, const GradedMap& from, int skip_row,
                  int skip_col) {
    GradedMap out(ring, src, dst);
    int oi = 0;
    for (int i = 0; i < from.rows(); ++i) {
        if (i == skip_row) continue;
        int oj = 0;
        for (int j = 0; j < from.cols(); ++j) {
            if (j == skip_col) continue;
            const Polynomial& e = from.at(i, j);
            if (!e.is_zero()) out.set(oi, oj, e);
            ++oj;
        }
        ++oi;
    }
    return out;
}

}  // namespace

ChainComplex minimize(ChainComplex cx) {
    const auto& field = cx.ring->field();
    while (true) {
        int pk = -1, pr = -1, pc = -1;
        for (int k = 0; k < int(cx.diffs.size()) && pk < 0; ++k) {
            const GradedMap& d = cx.diffs[k];
            for (int r = 0; r < d.rows() && pk < 0; ++r) {
                for (int co = 0; co < d.cols(); ++co) {
                    const Polynomial& e = d.at(r, co);
                    if (!e.is_zero() && e.degree() == 0) {
                        pk = k;
                        pr = r;
                        pc = co;
                        break;
                    }
                }
            }
        }
        if (pk < 0) break;

        const GradedMap& d = cx.diffs[pk];
        const FieldElem uinv = field.inv(d.at(pr, pc).terms()[0].coeff);
        // Schur complement on d, dropping pivot row pr / column pc.
        GradedFreeModule new_tgt = drop_index(cx.terms[pk], pr);
        GradedFreeModule new_src = drop_index(cx.terms[pk + 1], pc);
        GradedMap nd(cx.ring, new_src, new_tgt);
        int oi = 0;
        for (int i = 0; i < d.rows(); ++i) {
            if (i == pr) continue;
            const Polynomial& col_piece = d.at(i, pc);
            int oj = 0;
            for (int j = 0; j < d.cols(); ++j) {
                if (j == pc) continue;
                Polynomial e = d.at(i, j);
                if (!col_piece.is_zero()) {
                    const Polynomial& row_piece = d.at(pr, j);
                    if (!row_piece.is_zero()) {
                        e = e - col_piece.scaled(uinv) * row_piece;
                    }
                }
                if (!e.is_zero()) nd.set(oi, oj, std::move(e));
                ++oj;
            }
            ++oi;
        }
        // Neighbours just lose the pivot basis elements.
        if (pk + 1 < int(cx.diffs.size()))
            cx.diffs[pk + 1] =
                rebuild(cx.ring, cx.terms[pk + 2], new_src, cx.diffs[pk + 1], pc, -1);
        if (pk > 0)
            cx.diffs[pk - 1] =
                rebuild(cx.ring, new_tgt, cx.terms[pk - 1], cx.diffs[pk - 1], -1, pr);
        cx.diffs[pk] = std::move(nd);
        cx.terms[pk] = std::move(new_tgt);
        cx.terms[pk + 1] = std::move(new_src);
    }
    cx.validate();
    return cx;
}

ChainComplex dualize_shift(const ChainComplex& cx, std::int64_t twist) {
    ChainComplex out;
    out.ring = cx.ring;
    out.lo = cx.lo;
    out.notes = cx.notes;
    const int T = int(cx.terms.size());
    for (int k = T - 1; k >= 0; --k) {
        GradedFreeModule m = modules::dual(cx.terms[k]);
        for (auto& w : m.twists) w = checked_add(twist, w);  // twist - old
        out.terms.push_back(std::move(m));
    }
    for (int k = T - 2; k >= 0; --k) {
        // d_k: terms[k+1] -> terms[k]; its transpose connects the dualized
        // terms at out positions (T-1)-k -> (T-1)-(k+1) ... i.e. out.diffs
        // gain maps in ascending out order for descending k.
        const GradedMap& d = cx.diffs[k];
        const GradedFreeModule& src = out.terms[T - 1 - k];      // dual of terms[k]
        const GradedFreeModule& dst = out.terms[T - 1 - k - 1];  // dual of terms[k+1]
        GradedMap nd(cx.ring, src, dst);
        for (int i = 0; i < d.rows(); ++i)
            for (int j = 0; j < d.cols(); ++j) {
                const Polynomial& e = d.at(i, j);
                if (!e.is_zero()) nd.set(j, i, e);
            }
        out.diffs.push_back(std::move(nd));
    }
    out.validate();
    return out;
}

// ---- randomized exactness ---------------------------------------------------

std::string ExactnessReport::label() const {
    std::ostringstream os;
    os << "randomized(" << points << " points, field F_" << prime << ", seed " << seed
       << ")";
    return os.str();
}

ExactnessReport randomized_exactness(const ChainComplex& cx, int npoints,
                                     std::uint64_t seed) {
    const auto& field = cx.ring->field();
    require(field.kind() == rings::FieldKind::prime,
            "randomized exactness needs a prime field");
    ExactnessReport rep;
    rep.points = npoints;
    rep.seed = seed;
    rep.prime = field.characteristic();
    rep.passed = true;
    if (cx.terms.size() <= 1) return rep;

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::int64_t> dist(0, field.characteristic() - 1);
    const int nv = cx.ring->nvars();
    for (int pt = 0; pt < npoints; ++pt) {
        std::vector<FieldElem> x(nv, field.zero());
        bool nonzero = false;
        while (!nonzero) {
            for (auto& xi : x) {
                xi = field.from_int(dist(rng));
                if (!field.is_zero(xi)) nonzero = true;
            }
        }
        std::vector<int> rank_d(cx.diffs.size());
        for (std::size_t k = 0; k < cx.diffs.size(); ++k)
            rank_d[k] = cx.diffs[k].evaluate(x).rank();
        // Left end: full column rank.
        if (rank_d.back() != cx.terms.back().rank()) {
            rep.passed = false;
            rep.detail = "left end fails injectivity at point " + std::to_string(pt);
            return rep;
        }
        // Interior positions lo+1 .. hi-1: ranks add up.
        for (std::size_t k = 0; k + 1 < cx.diffs.size(); ++k) {
            if (rank_d[k] + rank_d[k + 1] != cx.terms[k + 1].rank()) {
                rep.passed = false;
                rep.detail = "rank defect at position " + std::to_string(cx.lo + int(k) + 1) +
                             ", point " + std::to_string(pt);
                return rep;
            }
        }
    }
    return rep;
}

}  // namespace detk::complexes
