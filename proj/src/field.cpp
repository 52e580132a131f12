#include "detk/field.hpp"

namespace detk::rings {

namespace {

std::uint64_t pow_mod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
    std::uint64_t r = 1 % mod;
    base %= mod;
    while (exp) {
        if (exp & 1) r = (__uint128_t)r * base % mod;
        base = (__uint128_t)base * base % mod;
        exp >>= 1;
    }
    return r;
}

std::int64_t mod_pos(std::int64_t n, std::int64_t p) {
    std::int64_t r = n % p;
    return r < 0 ? r + p : r;
}

// Extended Euclid inverse of a mod p, 0 < a < p.
std::int64_t inv_mod(std::int64_t a, std::int64_t p) {
    std::int64_t t = 0, nt = 1, r = p, nr = a;
    while (nr) {
        std::int64_t q = r / nr;
        t -= q * nt;
        std::swap(t, nt);
        r -= q * nr;
        std::swap(r, nr);
    }
    if (r != 1) fail("not invertible mod ", p);
    return mod_pos(t, p);
}

}  // namespace

bool is_prime_u32(std::uint32_t n) {
    if (n < 2) return false;
    for (std::uint32_t q : {2u, 3u, 5u, 7u, 11u, 13u}) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }
    std::uint32_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) d >>= 1, ++s;
    // Bases {2, 7, 61} are exact for n < 2^32.
    for (std::uint64_t a : {2ull, 7ull, 61ull}) {
        std::uint64_t x = pow_mod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = (__uint128_t)x * x % n;
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

CoeffField CoeffField::prime(std::uint32_t p) {
    require(p >= 2 && p < (1u << 31), "field characteristic out of range: ", p);
    require(is_prime_u32(p), "field characteristic is not prime: ", p);
    return CoeffField(FieldKind::prime, p);
}

CoeffField CoeffField::rationals() { return CoeffField(FieldKind::rationals, 0); }

FieldElem CoeffField::from_int(std::int64_t n) const {
    if (kind_ == FieldKind::prime) return {mod_pos(n, p_), 1};
    return {n, 1};
}

FieldElem CoeffField::from_fraction(std::int64_t n, std::int64_t d) const {
    require(d != 0, "zero denominator");
    if (kind_ == FieldKind::prime) {
        std::int64_t dn = mod_pos(d, p_);
        require(dn != 0, "denominator divisible by field characteristic ", p_);
        return {std::int64_t((__int128_t)mod_pos(n, p_) * inv_mod(dn, p_) % p_), 1};
    }
    if (d < 0) n = -n, d = -d;
    std::int64_t g = gcd64(n, d);
    if (g > 1) n /= g, d /= g;
    return {n, d};
}

FieldElem CoeffField::add(const FieldElem& a, const FieldElem& b) const {
    if (kind_ == FieldKind::prime) {
        std::int64_t s = a.num + b.num;
        return {s >= p_ ? s - p_ : s, 1};
    }
    return from_fraction(checked_add(checked_mul(a.num, b.den), checked_mul(b.num, a.den)),
                         checked_mul(a.den, b.den));
}

FieldElem CoeffField::sub(const FieldElem& a, const FieldElem& b) const { return add(a, neg(b)); }

FieldElem CoeffField::mul(const FieldElem& a, const FieldElem& b) const {
    if (kind_ == FieldKind::prime) return {std::int64_t((__int128_t)a.num * b.num % p_), 1};
    // Cross-reduce first so intermediate products stay small.
    std::int64_t g1 = gcd64(a.num, b.den), g2 = gcd64(b.num, a.den);
    std::int64_t n = checked_mul(g1 ? a.num / g1 : 0, g2 ? b.num / g2 : 0);
    std::int64_t d = checked_mul(g2 ? a.den / g2 : a.den, g1 ? b.den / g1 : b.den);
    if (n == 0) return {0, 1};
    return {n, d};
}

FieldElem CoeffField::div(const FieldElem& a, const FieldElem& b) const { return mul(a, inv(b)); }

FieldElem CoeffField::neg(const FieldElem& a) const {
    if (kind_ == FieldKind::prime) return {a.num == 0 ? 0 : p_ - a.num, 1};
    return {-a.num, a.den};
}

FieldElem CoeffField::inv(const FieldElem& a) const {
    require(a.num != 0, "division by zero");
    if (kind_ == FieldKind::prime) return {inv_mod(a.num, p_), 1};
    return a.num > 0 ? FieldElem{a.den, a.num} : FieldElem{-a.den, -a.num};
}

std::uint32_t CoeffField::to_raw(const FieldElem& a) const {
    require(kind_ == FieldKind::prime, "raw field values exist only over F_p");
    return static_cast<std::uint32_t>(a.num);
}

FieldElem CoeffField::from_raw(std::uint32_t r) const {
    require(kind_ == FieldKind::prime, "raw field values exist only over F_p");
    return {r % p_, 1};
}

std::string CoeffField::to_string(const FieldElem& a) const {
    if (kind_ == FieldKind::prime) {
        // Balanced representative: nicer to read and matches hand calculations.
        std::int64_t v = a.num > p_ / 2 ? a.num - p_ : a.num;
        return std::to_string(v);
    }
    if (a.den == 1) return std::to_string(a.num);
    return std::to_string(a.num) + "/" + std::to_string(a.den);
}

}  // namespace detk::rings
