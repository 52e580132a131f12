#include "detk/modules.hpp"

#include <algorithm>

namespace detk::modules {

GradedFreeModule GradedFreeModule::shifted(std::int64_t v) const {
    GradedFreeModule m = *this;
    for (auto& t : m.twists) t -= v;
    return m;
}

std::string GradedFreeModule::to_string() const {
    if (twists.empty()) return "0";
    std::string s;
    std::size_t i = 0;
    while (i < twists.size()) {
        std::size_t j = i;
        while (j < twists.size() && twists[j] == twists[i]) ++j;
        if (!s.empty()) s += " ++ ";
        s += "R(" + std::to_string(-twists[i]) + ")";
        if (j - i > 1) s += "^" + std::to_string(j - i);
        i = j;
    }
    return s;
}

GradedFreeModule free_module(std::vector<std::int64_t> twists) {
    return GradedFreeModule{std::move(twists), {}};
}

GradedFreeModule dual(const GradedFreeModule& m) {
    GradedFreeModule d;
    d.twists.reserve(m.twists.size());
    for (auto t : m.twists) d.twists.push_back(-t);
    d.labels = m.labels;
    for (auto& l : d.labels) l += "*";
    return d;
}

GradedFreeModule direct_sum(const GradedFreeModule& a, const GradedFreeModule& b) {
    GradedFreeModule s = a;
    s.twists.insert(s.twists.end(), b.twists.begin(), b.twists.end());
    if (!a.labels.empty() && !b.labels.empty())
        s.labels.insert(s.labels.end(), b.labels.begin(), b.labels.end());
    else
        s.labels.clear();
    return s;
}

GradedFreeModule tensor(const GradedFreeModule& a, const GradedFreeModule& b) {
    GradedFreeModule t;
    t.twists.reserve(a.twists.size() * b.twists.size());
    bool label = !a.labels.empty() && !b.labels.empty();
    for (int i = 0; i < a.rank(); ++i)
        for (int j = 0; j < b.rank(); ++j) {
            t.twists.push_back(a.twists[i] + b.twists[j]);
            if (label) t.labels.push_back(a.labels[i] + "|" + b.labels[j]);
        }
    return t;
}

std::vector<std::vector<int>> increasing_tuples(int n, int q) {
    require(q >= 0, "negative exterior power");
    std::vector<std::vector<int>> out;
    if (q > n) return out;
    std::vector<int> tup(q);
    for (int i = 0; i < q; ++i) tup[i] = i;
    while (true) {
        out.push_back(tup);
        int i = q - 1;
        while (i >= 0 && tup[i] == n - q + i) --i;
        if (i < 0) break;
        ++tup[i];
        for (int j = i + 1; j < q; ++j) tup[j] = tup[j - 1] + 1;
    }
    return out;
}

std::vector<std::vector<int>> exponent_vectors(int n, int p) {
    require(p >= 0, "negative symmetric power");
    require(n >= 0, "negative rank");
    std::vector<std::vector<int>> out;
    if (n == 0) {
        if (p == 0) out.push_back({});
        return out;
    }
    std::vector<int> exps(n, 0);
    // Lex-descending: first coordinate largest first.
    auto rec = [&](auto&& self, int var, int left) -> void {
        if (var == n - 1) {
            exps[var] = left;
            out.push_back(exps);
            return;
        }
        for (int e = left; e >= 0; --e) {
            exps[var] = e;
            self(self, var + 1, left - e);
        }
        exps[var] = 0;
    };
    rec(rec, 0, p);
    return out;
}

int pos_in_tuple(int j, const std::vector<int>& s) {
    int c = 0;
    for (int l : s)
        if (l < j) ++c;
    return c;
}

bool tuple_contains(const std::vector<int>& s, int j) {
    return std::binary_search(s.begin(), s.end(), j);
}

int shuffle_sign(const std::vector<int>& s, const std::vector<int>& t) {
    int inv = 0;
    for (int a : s)
        for (int b : t)
            if (a > b) ++inv;
    return inv % 2 ? -1 : 1;
}

int tuple_index(int n, const std::vector<int>& tup) {
    // Lex rank of a strictly increasing tuple from {0..n-1}.
    int q = int(tup.size());
    std::int64_t rank = 0;
    int prev = -1;
    for (int i = 0; i < q; ++i) {
        for (int v = prev + 1; v < tup[i]; ++v) rank += binomial(n - 1 - v, q - 1 - i);
        prev = tup[i];
    }
    return int(rank);
}

int exponent_index(int n, const std::vector<int>& exps) {
    require(int(exps.size()) == n, "exponent vector has wrong length");
    // Lex-descending rank: count vectors that come before.
    int p = 0;
    for (int e : exps) p += e;
    std::int64_t rank = 0;
    int left = p;
    for (int i = 0; i + 1 < n; ++i) {
        // Vectors with a larger entry at position i come first.
        for (int e = left; e > exps[i]; --e) rank += binomial((left - e) + (n - i - 2), n - i - 2);
        left -= exps[i];
    }
    return int(rank);
}

PowerBasis exterior_power(const GradedFreeModule& m, int q) {
    require(q >= 0 && q <= m.rank(), "exterior power out of range: ", q, " of rank ", m.rank());
    PowerBasis pb;
    pb.index = increasing_tuples(m.rank(), q);
    for (const auto& tup : pb.index) {
        std::int64_t tw = 0;
        std::string lab = "y{";
        for (std::size_t i = 0; i < tup.size(); ++i) {
            tw += m.twists[tup[i]];
            lab += (i ? "," : "") + std::to_string(tup[i]);
        }
        pb.mod.twists.push_back(tw);
        pb.mod.labels.push_back(lab + "}");
    }
    return pb;
}

PowerBasis symmetric_power(const GradedFreeModule& m, int p) {
    require(p >= 0, "negative symmetric power");
    PowerBasis pb;
    pb.index = exponent_vectors(m.rank(), p);
    for (const auto& exps : pb.index) {
        std::int64_t tw = 0;
        std::string lab = "g{";
        for (std::size_t i = 0; i < exps.size(); ++i) {
            tw += std::int64_t(exps[i]) * m.twists[i];
            lab += (i ? "," : "") + std::to_string(exps[i]);
        }
        pb.mod.twists.push_back(tw);
        pb.mod.labels.push_back(lab + "}");
    }
    return pb;
}

// ---------------------------------------------------------------- GradedMap

GradedMap::GradedMap(RingPtr ring, GradedFreeModule source, GradedFreeModule target)
    : ring_(std::move(ring)), source_(std::move(source)), target_(std::move(target)),
      entries_(std::size_t(source_.rank()) * target_.rank(), Polynomial(ring_)) {
    require(ring_ != nullptr, "graded map needs a ring");
}

GradedMap GradedMap::identity(const RingPtr& ring, const GradedFreeModule& m) {
    GradedMap f(ring, m, m);
    for (int i = 0; i < m.rank(); ++i) f.set(i, i, Polynomial::constant(ring, ring->field().one()));
    return f;
}

const Polynomial& GradedMap::at(int i, int j) const {
    return entries_[std::size_t(i) * source_.rank() + j];
}

void GradedMap::check_entry(int i, int j, const Polynomial& p) const {
    require(i >= 0 && i < rows() && j >= 0 && j < cols(), "entry out of range: ", i, ",", j);
    if (p.is_zero()) return;
    std::int64_t want = source_.twists[j] - target_.twists[i];
    require(p.degree() == want, "entry (", i, ",", j, ") has degree ", p.degree(),
            ", twists demand ", want);
}

void GradedMap::set(int i, int j, Polynomial p) {
    check_entry(i, j, p);
    entries_[std::size_t(i) * source_.rank() + j] = std::move(p);
}

void GradedMap::add_to(int i, int j, const Polynomial& p) {
    Polynomial s = at(i, j) + p;
    check_entry(i, j, s);
    entries_[std::size_t(i) * source_.rank() + j] = std::move(s);
}

bool GradedMap::is_zero() const {
    for (const auto& e : entries_)
        if (!e.is_zero()) return false;
    return true;
}

GradedMap GradedMap::compose(const GradedMap& inner) const {
    require(source_.twists == inner.target_.twists,
            "composition twist mismatch: ", source_.to_string(), " vs ",
            inner.target_.to_string());
    GradedMap r(ring_, inner.source_, target_);
    for (int i = 0; i < rows(); ++i)
        for (int k = 0; k < cols(); ++k) {
            const Polynomial& a = at(i, k);
            if (a.is_zero()) continue;
            for (int j = 0; j < inner.cols(); ++j) {
                const Polynomial& b = inner.at(k, j);
                if (b.is_zero()) continue;
                r.add_to(i, j, a * b);
            }
        }
    return r;
}

GradedMap GradedMap::plus(const GradedMap& o) const {
    require(source_.twists == o.source_.twists && target_.twists == o.target_.twists,
            "graded map sum shape mismatch");
    GradedMap r = *this;
    for (int i = 0; i < rows(); ++i)
        for (int j = 0; j < cols(); ++j)
            if (!o.at(i, j).is_zero()) r.add_to(i, j, o.at(i, j));
    return r;
}

GradedMap GradedMap::minus(const GradedMap& o) const { return plus(o.negated()); }

GradedMap GradedMap::negated() const {
    GradedMap r = *this;
    for (auto& e : r.entries_) e = -e;
    return r;
}

GradedMap GradedMap::scaled(const FieldElem& c) const {
    GradedMap r = *this;
    for (auto& e : r.entries_) e = e.scaled(c);
    return r;
}

GradedMap GradedMap::dual_map() const {
    GradedMap r(ring_, dual(target_), dual(source_));
    for (int i = 0; i < rows(); ++i)
        for (int j = 0; j < cols(); ++j) r.set(j, i, at(i, j));
    return r;
}

la::DenseMat GradedMap::evaluate(const std::vector<FieldElem>& point) const {
    la::DenseMat m(ring_->field(), rows(), cols());
    for (int i = 0; i < rows(); ++i)
        for (int j = 0; j < cols(); ++j)
            if (!at(i, j).is_zero()) m.set(i, j, at(i, j).eval(point));
    return m;
}

bool GradedMap::equals(const GradedMap& o) const {
    if (source_.twists != o.source_.twists || target_.twists != o.target_.twists) return false;
    for (int i = 0; i < rows(); ++i)
        for (int j = 0; j < cols(); ++j)
            if (!at(i, j).equals(o.at(i, j))) return false;
    return true;
}

std::string GradedMap::to_string() const {
    std::string s = source_.to_string() + " -> " + target_.to_string() + "\n";
    for (int i = 0; i < rows(); ++i) {
        s += "[ ";
        for (int j = 0; j < cols(); ++j) {
            if (j) s += " | ";
            s += at(i, j).to_string();
        }
        s += " ]\n";
    }
    return s;
}

GradedMap tensor_map(const GradedMap& f, const GradedMap& g) {
    GradedMap r(f.ring(), tensor(f.source(), g.source()), tensor(f.target(), g.target()));
    int gs = g.source().rank(), gt = g.target().rank();
    for (int i = 0; i < f.rows(); ++i)
        for (int j = 0; j < f.cols(); ++j) {
            if (f.at(i, j).is_zero()) continue;
            for (int k = 0; k < gt; ++k)
                for (int l = 0; l < gs; ++l) {
                    if (g.at(k, l).is_zero()) continue;
                    r.set(i * gt + k, j * gs + l, f.at(i, j) * g.at(k, l));
                }
        }
    return r;
}

Polynomial poly_det(const RingPtr& ring, int n,
                    const std::vector<std::vector<Polynomial>>& e) {
    if (n == 0) return Polynomial::constant(ring, ring->field().one());
    if (n == 1) return e[0][0];
    // Laplace along the first row with sign alternation.
    Polynomial det(ring);
    for (int j = 0; j < n; ++j) {
        if (e[0][j].is_zero()) continue;
        std::vector<std::vector<Polynomial>> sub(n - 1);
        for (int i = 1; i < n; ++i)
            for (int k = 0; k < n; ++k)
                if (k != j) sub[i - 1].push_back(e[i][k]);
        Polynomial m = e[0][j] * poly_det(ring, n - 1, sub);
        det = (j % 2 == 0) ? det + m : det - m;
    }
    return det;
}

GradedMap exterior_power_map(const GradedMap& f, int q) {
    auto src = exterior_power(f.source(), q);
    auto tgt = exterior_power(f.target(), q);
    GradedMap r(f.ring(), src.mod, tgt.mod);
    for (int a = 0; a < int(tgt.index.size()); ++a)
        for (int b = 0; b < int(src.index.size()); ++b) {
            std::vector<std::vector<Polynomial>> sub(q, std::vector<Polynomial>());
            for (int i = 0; i < q; ++i)
                for (int j = 0; j < q; ++j) sub[i].push_back(f.at(tgt.index[a][i], src.index[b][j]));
            Polynomial d = poly_det(f.ring(), q, sub);
            if (!d.is_zero()) r.set(a, b, d);
        }
    return r;
}

GradedMap symmetric_power_map(const GradedMap& f, int p) {
    auto src = symmetric_power(f.source(), p);
    auto tgt = symmetric_power(f.target(), p);
    GradedMap r(f.ring(), src.mod, tgt.mod);
    int nt = f.target().rank();
    for (int b = 0; b < int(src.index.size()); ++b) {
        // Image of the source monomial: product over source factors of the
        // column polynomials, expanded over target exponent vectors.
        // acc: map from target exponent vector index -> coefficient polynomial.
        std::vector<Polynomial> acc(tgt.index.size(), Polynomial(f.ring()));
        std::vector<std::vector<int>> cur;   // exponent vectors reached so far
        std::vector<Polynomial> curc;        // their coefficients
        cur.push_back(std::vector<int>(nt, 0));
        curc.push_back(Polynomial::constant(f.ring(), f.ring()->field().one()));
        for (int s = 0; s < f.source().rank(); ++s)
            for (int rep = 0; rep < src.index[b][s]; ++rep) {
                std::vector<std::vector<int>> nxt;
                std::vector<Polynomial> nxtc;
                for (std::size_t u = 0; u < cur.size(); ++u)
                    for (int tgt_i = 0; tgt_i < nt; ++tgt_i) {
                        if (f.at(tgt_i, s).is_zero()) continue;
                        auto ev = cur[u];
                        ++ev[tgt_i];
                        Polynomial c = curc[u] * f.at(tgt_i, s);
                        // merge
                        bool found = false;
                        for (std::size_t w = 0; w < nxt.size(); ++w)
                            if (nxt[w] == ev) {
                                nxtc[w] = nxtc[w] + c;
                                found = true;
                                break;
                            }
                        if (!found) {
                            nxt.push_back(std::move(ev));
                            nxtc.push_back(std::move(c));
                        }
                    }
                cur = std::move(nxt);
                curc = std::move(nxtc);
            }
        for (std::size_t u = 0; u < cur.size(); ++u)
            if (!curc[u].is_zero()) acc[exponent_index(nt, cur[u])] = curc[u];
        for (int a = 0; a < int(tgt.index.size()); ++a)
            if (!acc[a].is_zero()) r.set(a, b, acc[a]);
    }
    return r;
}

std::vector<Polynomial> wedge_multiply(const RingPtr& ring, int n, int q, int j,
                                       const std::vector<Polynomial>& f) {
    auto src = increasing_tuples(n, q);
    auto tgt = increasing_tuples(n, q + 1);
    require(f.size() == src.size(), "wedge input has wrong length");
    std::vector<Polynomial> out(tgt.size(), Polynomial(ring));
    for (std::size_t b = 0; b < src.size(); ++b) {
        if (f[b].is_zero() || tuple_contains(src[b], j)) continue;
        auto tup = src[b];
        tup.insert(std::lower_bound(tup.begin(), tup.end(), j), j);
        int sign = pos_in_tuple(j, src[b]) % 2 ? -1 : 1;
        int idx = tuple_index(n, tup);
        out[idx] = sign > 0 ? out[idx] + f[b] : out[idx] - f[b];
    }
    return out;
}

std::vector<Polynomial> contraction(const RingPtr& ring, int n, int q, int j,
                                    const std::vector<Polynomial>& f) {
    require(q >= 1, "contraction needs q >= 1");
    auto src = increasing_tuples(n, q);
    auto tgt = increasing_tuples(n, q - 1);
    require(f.size() == src.size(), "contraction input has wrong length");
    std::vector<Polynomial> out(tgt.size(), Polynomial(ring));
    for (std::size_t b = 0; b < src.size(); ++b) {
        if (f[b].is_zero() || !tuple_contains(src[b], j)) continue;
        auto tup = src[b];
        tup.erase(std::lower_bound(tup.begin(), tup.end(), j));
        int sign = pos_in_tuple(j, src[b]) % 2 ? -1 : 1;
        int idx = tuple_index(n, tup);
        out[idx] = sign > 0 ? out[idx] + f[b] : out[idx] - f[b];
    }
    return out;
}

}  // namespace detk::modules
