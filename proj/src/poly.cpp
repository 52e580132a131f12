#include "detk/poly.hpp"

#include <algorithm>
#include <cctype>

namespace detk::rings {

std::string mono_to_string(Mono m, const std::vector<std::string>& names) {
    if (m == mono_one()) return "1";
    std::string s;
    for (int i = 0; i < int(names.size()); ++i) {
        int e = m.exponent(i);
        if (e == 0) continue;
        if (!s.empty()) s += "*";
        s += names[i];
        if (e > 1) s += "^" + std::to_string(e);
    }
    return s;
}

std::vector<Mono> monomials_of_degree(int nvars, int d) {
    require(nvars >= 1 && nvars <= kMaxVars, "variable count out of range: ", nvars);
    require(d >= 0 && d < 128, "degree out of range: ", d);
    std::vector<Mono> out;
    std::vector<int> exps(nvars, 0);
    // Enumerate all exponent vectors with sum d, then sort by the order.
    auto rec = [&](auto&& self, int var, int left) -> void {
        if (var == nvars - 1) {
            exps[var] = left;
            out.push_back(mono_from_exponents(exps));
            return;
        }
        for (int e = left; e >= 0; --e) {
            exps[var] = e;
            self(self, var + 1, left - e);
        }
        exps[var] = 0;
    };
    rec(rec, 0, d);
    std::sort(out.begin(), out.end(),
              [&](Mono a, Mono b) { return mono_grevlex_less(b, a, nvars); });
    return out;
}

PolyRing::PolyRing(int nvars, CoeffField field, std::vector<std::string> names)
    : nvars_(nvars), field_(field), names_(std::move(names)) {
    require(nvars >= 1 && nvars <= kMaxVars, "variable count out of range: ", nvars);
    require(int(names_.size()) == nvars, "need one name per variable");
}

std::int64_t PolyRing::dim_of_degree(int d) const {
    if (d < 0) return 0;
    return binomial(d + nvars_ - 1, nvars_ - 1);
}

const std::vector<Mono>& PolyRing::basis_of_degree(int d) const {
    require(d >= 0 && d < 128, "degree out of range: ", d);
    std::lock_guard<std::mutex> lock(cache_mutex_);
    if (int(basis_cache_.size()) <= d) basis_cache_.resize(d + 1);
    if (!basis_cache_[d])
        basis_cache_[d] = std::make_unique<std::vector<Mono>>(monomials_of_degree(nvars_, d));
    return *basis_cache_[d];
}

int PolyRing::index_in_degree(Mono m) const {
    int d = m.total_degree();
    const auto& basis = basis_of_degree(d);
    std::lock_guard<std::mutex> lock(cache_mutex_);
    if (int(index_cache_.size()) <= d) index_cache_.resize(d + 1);
    if (!index_cache_[d]) {
        auto map = std::make_unique<std::unordered_map<std::uint64_t, int>>();
        map->reserve(basis.size());
        for (int i = 0; i < int(basis.size()); ++i) (*map)[basis[i].packed] = i;
        index_cache_[d] = std::move(map);
    }
    auto it = index_cache_[d]->find(m.packed);
    require(it != index_cache_[d]->end(), "monomial not in degree basis");
    return it->second;
}

RingPtr make_poly_ring(int nvars, const CoeffField& field) {
    std::vector<std::string> names;
    for (int i = 0; i < nvars; ++i) names.push_back("x" + std::to_string(i));
    return make_poly_ring(nvars, field, std::move(names));
}

RingPtr make_poly_ring(int nvars, const CoeffField& field, std::vector<std::string> names) {
    return std::make_shared<const PolyRing>(nvars, field, std::move(names));
}

Polynomial::Polynomial(RingPtr ring, std::vector<Term> terms) : ring_(std::move(ring)) {
    require(ring_ != nullptr, "polynomial needs a ring");
    normalize(std::move(terms));
}

void Polynomial::normalize(std::vector<Term> raw) {
    const auto& f = ring_->field();
    std::sort(raw.begin(), raw.end(), [&](const Term& a, const Term& b) {
        return mono_grevlex_less(b.mono, a.mono, ring_->nvars());
    });
    terms_.clear();
    for (auto& t : raw) {
        if (f.is_zero(t.coeff)) continue;
        if (!terms_.empty() && terms_.back().mono == t.mono) {
            terms_.back().coeff = f.add(terms_.back().coeff, t.coeff);
            if (f.is_zero(terms_.back().coeff)) terms_.pop_back();
        } else {
            terms_.push_back(t);
        }
    }
    if (!terms_.empty()) {
        int d = terms_.front().mono.total_degree();
        for (const auto& t : terms_)
            require(t.mono.total_degree() == d,
                    "inhomogeneous polynomial: degrees ", d, " and ", t.mono.total_degree());
    }
}

Polynomial Polynomial::constant(RingPtr ring, const FieldElem& c) {
    return Polynomial(std::move(ring), {Term{mono_one(), c}});
}

Polynomial Polynomial::variable(RingPtr ring, int var) {
    require(var >= 0 && var < ring->nvars(), "variable index out of range: ", var);
    auto one = ring->field().one();
    return Polynomial(std::move(ring), {Term{mono_var(var), one}});
}

Polynomial Polynomial::monomial(RingPtr ring, Mono m, const FieldElem& c) {
    return Polynomial(std::move(ring), {Term{m, c}});
}

int Polynomial::degree() const {
    require(!terms_.empty(), "degree of the zero polynomial");
    return terms_.front().mono.total_degree();
}

const Term& Polynomial::leading_term() const {
    require(!terms_.empty(), "leading term of the zero polynomial");
    return terms_.front();
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    require(ring_ && o.ring_, "polynomial needs a ring");
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    require(ring_->field() == o.ring_->field() && ring_->nvars() == o.ring_->nvars(),
            "mixed-ring arithmetic");
    std::vector<Term> merged = terms_;
    merged.insert(merged.end(), o.terms_.begin(), o.terms_.end());
    return Polynomial(ring_, std::move(merged));
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (-o); }

Polynomial Polynomial::operator-() const {
    if (!ring_) return *this;
    Polynomial r(*this);
    for (auto& t : r.terms_) t.coeff = ring_->field().neg(t.coeff);
    return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    require(ring_ && o.ring_, "polynomial needs a ring");
    const auto& f = ring_->field();
    if (is_zero() || o.is_zero()) return Polynomial(ring_);
    std::unordered_map<std::uint64_t, FieldElem> acc;
    acc.reserve(terms_.size() * o.terms_.size());
    for (const auto& a : terms_)
        for (const auto& b : o.terms_) {
            Mono m = mono_mul(a.mono, b.mono);
            auto [it, fresh] = acc.try_emplace(m.packed, f.zero());
            it->second = f.add(it->second, f.mul(a.coeff, b.coeff));
        }
    std::vector<Term> terms;
    terms.reserve(acc.size());
    for (auto& [packed, c] : acc)
        if (!f.is_zero(c)) terms.push_back(Term{Mono{packed}, c});
    return Polynomial(ring_, std::move(terms));
}

Polynomial Polynomial::scaled(const FieldElem& c) const {
    require(ring_ != nullptr, "polynomial needs a ring");
    const auto& f = ring_->field();
    if (f.is_zero(c)) return Polynomial(ring_);
    Polynomial r(*this);
    for (auto& t : r.terms_) t.coeff = f.mul(t.coeff, c);
    return r;
}

Polynomial Polynomial::times_monomial(Mono m) const {
    Polynomial r(*this);
    for (auto& t : r.terms_) t.mono = mono_mul(t.mono, m);
    return r;
}

bool Polynomial::equals(const Polynomial& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i)
        if (!(terms_[i].mono == o.terms_[i].mono && terms_[i].coeff == o.terms_[i].coeff))
            return false;
    return true;
}

FieldElem Polynomial::eval(const std::vector<FieldElem>& point) const {
    require(ring_ != nullptr, "polynomial needs a ring");
    const auto& f = ring_->field();
    require(int(point.size()) == ring_->nvars(), "point has wrong dimension");
    FieldElem sum = f.zero();
    for (const auto& t : terms_) {
        FieldElem v = t.coeff;
        for (int i = 0; i < ring_->nvars(); ++i)
            for (int e = 0; e < t.mono.exponent(i); ++e) v = f.mul(v, point[i]);
        sum = f.add(sum, v);
    }
    return sum;
}

Polynomial Polynomial::substitute(const RingPtr& target,
                                  const std::vector<Polynomial>& images) const {
    require(ring_ != nullptr, "polynomial needs a ring");
    require(int(images.size()) == ring_->nvars(), "need one image per variable");
    Polynomial sum(target);
    for (const auto& t : terms_) {
        Polynomial prod = Polynomial::constant(target, t.coeff);
        for (int i = 0; i < ring_->nvars(); ++i)
            for (int e = 0; e < t.mono.exponent(i); ++e) prod = prod * images[i];
        sum = sum + prod;
    }
    return sum;
}

std::string Polynomial::to_string() const {
    if (terms_.empty()) return "0";
    const auto& f = ring_->field();
    std::string s;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        std::string c = f.to_string(terms_[i].coeff);
        bool neg = !c.empty() && c[0] == '-';
        if (neg) c = c.substr(1);
        std::string m = mono_to_string(terms_[i].mono, ring_->var_names());
        std::string body;
        if (m == "1") body = c;
        else if (c == "1") body = m;
        else body = c + "*" + m;
        if (i == 0) s += (neg ? "-" : "") + body;
        else s += (neg ? " - " : " + ") + body;
    }
    return s;
}

Polynomial random_form(const RingPtr& ring, int d, std::uint64_t seed) {
    require(d >= 1, "random form degree must be positive, got ", d);
    require(ring->field().kind() == FieldKind::prime, "random forms need a prime field");
    std::mt19937_64 rng(seed);
    return random_form(ring, d, rng);
}

Polynomial random_form(const RingPtr& ring, int d, std::mt19937_64& rng) {
    const auto& f = ring->field();
    std::vector<Term> terms;
    for (Mono m : ring->basis_of_degree(d)) {
        FieldElem c;
        if (f.kind() == FieldKind::prime) {
            std::uniform_int_distribution<std::int64_t> dist(0, f.characteristic() - 1);
            c = f.from_int(dist(rng));
        } else {
            std::uniform_int_distribution<std::int64_t> dist(-20, 20);
            c = f.from_int(dist(rng));
        }
        terms.push_back(Term{m, c});
    }
    return Polynomial(ring, std::move(terms));
}

namespace {

// Minimal recursive-descent parser for sums of monomial terms.
struct PolyParser {
    const RingPtr& ring;
    const std::string& text;
    std::size_t pos = 0;

    explicit PolyParser(const RingPtr& r, const std::string& t) : ring(r), text(t) {}

    [[noreturn]] void bad(const std::string& why) const {
        fail("cannot parse polynomial \"", text, "\" at offset ", pos, ": ", why);
    }

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    std::int64_t parse_integer() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == start) bad("expected an integer");
        std::int64_t value = 0;
        for (std::size_t k = start; k < pos; ++k) {
            value = checked_add(checked_mul(value, 10), static_cast<std::int64_t>(text[k] - '0'));
        }
        return value;
    }

    std::string parse_name() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
            ++pos;
        }
        if (pos == start) bad("expected a variable name");
        return text.substr(start, pos - start);
    }

    int variable_index(const std::string& name) {
        for (int v = 0; v < ring->nvars(); ++v) {
            if (ring->var_names()[v] == name) return v;
        }
        bad("unknown variable \"" + name + "\"");
    }

    // term := [sign] (integer[/integer])? ('*'? factor)* with factor := name ('^' integer)?
    Polynomial parse_term(bool negate) {
        const auto& f = ring->field();
        FieldElem coeff = negate ? f.neg(f.one()) : f.one();
        Mono mono = mono_one();
        bool saw_anything = false;

        skip_ws();
        if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            std::int64_t num = parse_integer();
            std::int64_t den = 1;
            if (eat('/')) den = parse_integer();
            coeff = f.mul(coeff, f.from_fraction(num, den));
            saw_anything = true;
            if (!eat('*')) {
                skip_ws();
                bool next_is_var =
                    pos < text.size() && (std::isalpha(static_cast<unsigned char>(text[pos])) ||
                                          text[pos] == '_');
                if (!next_is_var) return Polynomial::constant(ring, coeff);
            }
        }
        while (true) {
            skip_ws();
            if (pos >= text.size() ||
                !(std::isalpha(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
                if (!saw_anything) bad("expected a term");
                break;
            }
            int var = variable_index(parse_name());
            std::int64_t exp = 1;
            if (eat('^')) exp = parse_integer();
            require(exp >= 1 && exp < 128, "exponent out of range in \"", text, "\"");
            mono = mono_mul(mono, mono_var(var, static_cast<int>(exp)));
            saw_anything = true;
            if (!eat('*')) {
                skip_ws();
                bool next_is_var =
                    pos < text.size() && (std::isalpha(static_cast<unsigned char>(text[pos])) ||
                                          text[pos] == '_');
                if (!next_is_var) break;
                bad("missing '*' between factors");
            }
        }
        return Polynomial::monomial(ring, mono, coeff);
    }

    Polynomial parse_sum() {
        skip_ws();
        if (pos >= text.size()) bad("empty input");
        bool negate = false;
        if (eat('-')) {
            negate = true;
        } else {
            eat('+');
        }
        Polynomial result = parse_term(negate);
        while (true) {
            skip_ws();
            if (pos >= text.size()) break;
            if (eat('+')) {
                result = result + parse_term(false);
            } else if (eat('-')) {
                result = result + parse_term(true);
            } else {
                bad("expected '+' or '-'");
            }
        }
        return result;
    }
};

}  // namespace

Polynomial parse_polynomial(const RingPtr& ring, const std::string& text) {
    PolyParser p(ring, text);
    return p.parse_sum();
}

}  // namespace detk::rings
